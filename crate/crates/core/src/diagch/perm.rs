use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::DiagError;

/// A permutation of `{1, …, k}`, stored 0-based.
///
/// JSON and display use 1-based labels: `[2, 1, 3]` or `(1,2)(3)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(k: usize) -> Self {
        Perm((0..k).collect())
    }

    /// From 0-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self, DiagError> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &i in &images {
            if i >= k || std::mem::replace(&mut seen[i], true) {
                return Err(DiagError::BadPermutation(format!("{images:?} is not a bijection")));
            }
        }
        Ok(Perm(images))
    }

    /// From cycles of 0-based labels; unlisted labels are fixed.
    pub fn from_cycles(k: usize, cycles: &[Vec<usize>]) -> Result<Self, DiagError> {
        let mut images: Vec<usize> = (0..k).collect();
        let mut seen = vec![false; k];
        for c in cycles {
            for (n, &i) in c.iter().enumerate() {
                if i >= k || std::mem::replace(&mut seen[i], true) {
                    return Err(DiagError::BadPermutation(format!("label {} repeated or out of range", i + 1)));
                }
                images[i] = c[(n + 1) % c.len()];
            }
        }
        Ok(Perm(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    /// `σ π σ⁻¹`: the same permutation after renaming each label `i` to `σ(i)`.
    pub fn conjugate_by(&self, sigma: &Perm) -> Perm {
        sigma.compose(self).compose(&sigma.inverse())
    }

    /// Cycles in order of their smallest label, each starting there.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut c = vec![start];
            seen[start] = true;
            let mut i = self.0[start];
            while i != start {
                seen[i] = true;
                c.push(i);
                i = self.0[i];
            }
            out.push(c);
        }
        out
    }

    /// The cycle containing `i`.
    pub fn cycle_of(&self, i: usize) -> Vec<usize> {
        let mut c = vec![i];
        let mut j = self.0[i];
        while j != i {
            c.push(j);
            j = self.0[j];
        }
        c
    }

    /// Is `labels` (in any order) exactly one cycle?
    pub fn is_cycle(&self, labels: &[usize]) -> bool {
        let Some(&first) = labels.first() else { return false };
        if first >= self.len() {
            return false;
        }
        let mut c = self.cycle_of(first);
        let mut l = labels.to_vec();
        c.sort_unstable();
        l.sort_unstable();
        c == l
    }
}

impl TryFrom<Vec<usize>> for Perm {
    type Error = DiagError;
    fn try_from(one_based: Vec<usize>) -> Result<Self, DiagError> {
        if one_based.contains(&0) {
            return Err(DiagError::BadPermutation("labels start at 1".into()));
        }
        Perm::from_images(one_based.into_iter().map(|i| i - 1).collect())
    }
}

impl From<Perm> for Vec<usize> {
    fn from(p: Perm) -> Self {
        p.0.into_iter().map(|i| i + 1).collect()
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.cycles() {
            let labels: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "({})", labels.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{self}")
    }
}

/// Parses cycle notation with an explicit size, e.g. `"3:(1,2)"`, or a
/// bare cycle list whose largest label sets the size.
impl FromStr for Perm {
    type Err = DiagError;
    fn from_str(s: &str) -> Result<Self, DiagError> {
        let bad = || DiagError::BadPermutation(format!("cannot parse {s:?}"));
        let (k, body) = match s.split_once(':') {
            Some((k, body)) => (Some(k.trim().parse::<usize>().map_err(|_| bad())?), body),
            None => (None, s),
        };
        let mut cycles = Vec::new();
        for chunk in body.split(')') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let inner = chunk.strip_prefix('(').ok_or_else(bad)?;
            let labels: Result<Vec<usize>, _> = inner
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().ok().filter(|&i| i > 0).map(|i| i - 1).ok_or_else(bad))
                .collect();
            cycles.push(labels?);
        }
        let k = k.unwrap_or_else(|| cycles.iter().flatten().map(|&i| i + 1).max().unwrap_or(0));
        Perm::from_cycles(k, &cycles)
    }
}
