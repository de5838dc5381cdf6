//! SVG figures of quadrangulations.
//!
//! Each quadrilateral is drawn as the polygon `0, r, r + l', l` together with
//! its diagonal, and the quadrilaterals of one state sit side by side in a
//! panel. A trace becomes one row of panels per step, read left to right and
//! top to bottom. All coordinates are computed exactly and printed with 12
//! decimals, so equal inputs give byte-identical files.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::CliError;
use octocf::diagch::LabeledQuadrangulation;
use octocf::farey::Direction;
use octocf::numerics::{QuadNum, Rational, Vec2};
use octocf::octagon::Trace;

const DIGITS: usize = 12;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RenderSpec {
    /// SVG units per unit of length.
    pub scale: Rational,
    pub show_labels: bool,
    /// Drawn from the bottom corner of every quadrilateral.
    pub direction_overlay: Option<Direction>,
    pub out: Option<PathBuf>,
}

impl RenderSpec {
    pub fn new(scale: Rational) -> Result<Self, CliError> {
        if scale <= Rational::from_integer(0.into()) {
            return Err(CliError::Invalid(format!("scale must be positive, got {scale}")));
        }
        Ok(RenderSpec { scale, show_labels: true, direction_overlay: None, out: None })
    }
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec::new(Rational::from_integer(100.into())).expect("positive")
    }
}

/// Which copy of each state a trace is drawn from.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Frame {
    #[default]
    Renormalized,
    Original,
}

fn q(n: i64, d: i64) -> QuadNum {
    QuadNum::ratio(n, d)
}

/// A state ready to be placed: quadrilaterals shifted to sit side by side.
struct Layout {
    caption: String,
    class: &'static str,
    quads: Vec<[Vec2; 4]>,
    diagonals: Vec<(Vec2, Vec2)>,
    width: QuadNum,
    y_min: QuadNum,
    y_max: QuadNum,
}

impl Layout {
    fn new(state: &LabeledQuadrangulation, caption: String, class: &'static str) -> Result<Layout, CliError> {
        let gap = q(1, 2);
        let mut cursor = QuadNum::zero();
        let mut quads = Vec::new();
        let mut diagonals = Vec::new();
        let mut y_min = QuadNum::zero();
        let mut y_max = QuadNum::zero();
        for (i, w) in state.wedges().iter().enumerate() {
            let d = state.diagonal(i).map_err(CliError::invalid)?;
            let corners = [Vec2::zero(), w.r.clone(), d.clone(), w.l.clone()];
            let x_lo = corners.iter().map(|c| c.x.clone()).min().expect("four corners");
            let x_hi = corners.iter().map(|c| c.x.clone()).max().expect("four corners");
            for c in &corners {
                y_min = y_min.min(c.y.clone());
                y_max = y_max.max(c.y.clone());
            }
            let shift = Vec2::new(&cursor - &x_lo, QuadNum::zero());
            let placed = corners.map(|c| &c + &shift);
            diagonals.push((placed[0].clone(), placed[2].clone()));
            quads.push(placed);
            cursor = &(&cursor + &(&x_hi - &x_lo)) + &gap;
        }
        let width = if quads.is_empty() { QuadNum::zero() } else { &cursor - &gap };
        Ok(Layout { caption, class, quads, diagonals, width, y_min, y_max })
    }

    fn height(&self) -> QuadNum {
        &self.y_max - &self.y_min
    }
}

struct Canvas<'a> {
    spec: &'a RenderSpec,
    body: String,
}

impl Canvas<'_> {
    fn num(&self, x: &QuadNum) -> String {
        x.mul_rational(&self.spec.scale).to_decimal(DIGITS)
    }

    /// `origin` is the top-left corner of the panel's drawing area in model
    /// units, with `y` growing downwards.
    fn point(&self, layout: &Layout, origin: &Vec2, p: &Vec2) -> (String, String) {
        let x = &origin.x + &p.x;
        let y = &origin.y + &(&layout.y_max - &p.y);
        (self.num(&x), self.num(&y))
    }

    fn panel(&mut self, layout: &Layout, origin: &Vec2, id: &str) {
        let caption_height = q(1, 2);
        let font = q(3, 10);
        let mut s = String::new();
        writeln!(s, r#"<g class="{}" id="{id}">"#, layout.class).unwrap();
        writeln!(
            s,
            r#"<text class="caption" x="{}" y="{}" font-size="{}">{}</text>"#,
            self.num(&origin.x),
            self.num(&(&origin.y + &q(3, 10))),
            self.num(&font),
            escape(&layout.caption)
        )
        .unwrap();
        let area = Vec2::new(origin.x.clone(), &origin.y + &caption_height);
        for (i, corners) in layout.quads.iter().enumerate() {
            let points: Vec<String> = corners
                .iter()
                .map(|c| {
                    let (x, y) = self.point(layout, &area, c);
                    format!("{x},{y}")
                })
                .collect();
            writeln!(
                s,
                r##"<polygon class="quad" data-label="{}" points="{}" fill="#eef3fb" stroke="#1d3557" stroke-width="1"/>"##,
                i + 1,
                points.join(" ")
            )
            .unwrap();
            let (a, b) = &layout.diagonals[i];
            let ((x1, y1), (x2, y2)) = (self.point(layout, &area, a), self.point(layout, &area, b));
            writeln!(
                s,
                r##"<line class="diagonal" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#999999" stroke-dasharray="4 3"/>"##
            )
            .unwrap();
            if let Some(dir) = &self.spec.direction_overlay {
                let v = dir.vec();
                let top = &corners[2] - &corners[0];
                let reach = top.x.abs().max(top.y.abs());
                let extent = v.x.abs().max(v.y.abs());
                let t = reach.checked_div(&extent).unwrap_or_else(|_| QuadNum::one());
                let tip = &corners[0] + &v.scale(&t);
                let ((x1, y1), (x2, y2)) = (self.point(layout, &area, &corners[0]), self.point(layout, &area, &tip));
                writeln!(s, r##"<line class="direction" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#e63946"/>"##)
                    .unwrap();
            }
            if self.spec.show_labels {
                let sum = &(&corners[1] + &corners[2]) + &corners[3];
                let centroid = sum.scale(&q(1, 4));
                let (x, y) = self.point(layout, &area, &centroid);
                writeln!(
                    s,
                    r#"<text class="wedge-label" x="{x}" y="{y}" font-size="{}" text-anchor="middle">{}</text>"#,
                    self.num(&font),
                    i + 1
                )
                .unwrap();
            }
        }
        s.push_str("</g>\n");
        self.body.push_str(&s);
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Rows of panels, each row left to right.
fn render_rows(rows: &[Vec<Layout>], spec: &RenderSpec) -> String {
    let margin = q(1, 2);
    let panel_gap = QuadNum::one();
    let caption_height = q(1, 2);
    let mut canvas = Canvas { spec, body: String::new() };
    let mut y = margin.clone();
    let mut total_width = QuadNum::zero();
    for (r, row) in rows.iter().enumerate() {
        let mut x = margin.clone();
        let mut row_height = QuadNum::zero();
        for (c, layout) in row.iter().enumerate() {
            canvas.panel(layout, &Vec2::new(x.clone(), y.clone()), &format!("panel-{r}-{c}"));
            x = &(&x + &layout.width) + &panel_gap;
            row_height = row_height.max(layout.height());
        }
        total_width = total_width.max(&x - &panel_gap);
        y = &(&(&y + &caption_height) + &row_height) + &panel_gap;
    }
    let width = &total_width + &margin;
    let height = &(&y - &panel_gap) + &margin;
    let (w, h) = (canvas.num(&width), canvas.num(&height));
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n{}</svg>\n",
        canvas.body
    )
}

/// One panel with the quadrilaterals of `state`.
pub fn render_quadrangulation(
    state: &LabeledQuadrangulation,
    caption: &str,
    spec: &RenderSpec,
) -> Result<String, CliError> {
    let layout = Layout::new(state, caption.to_string(), "panel start")?;
    Ok(render_rows(&[vec![layout]], spec))
}

/// One row per step with its intermediate states; a trace without steps
/// shows its starting quadrangulation alone.
pub fn render_trace(trace: &Trace, spec: &RenderSpec, frame: Frame) -> Result<String, CliError> {
    let mut rows = Vec::new();
    if trace.steps.is_empty() {
        let start =
            trace.start.as_ref().ok_or_else(|| CliError::invalid("the trace has no starting quadrangulation"))?;
        rows.push(vec![Layout::new(start, "start".into(), "panel start")?]);
    }
    for (k, step) in trace.steps.iter().enumerate() {
        let row = step
            .panels
            .iter()
            .map(|p| {
                let state = match frame {
                    Frame::Renormalized => &p.state,
                    Frame::Original => &p.original,
                };
                let class = if p.label == "start" { "panel start" } else { "panel move" };
                Layout::new(state, format!("step {} (sector {}): {}", k + 1, step.digit, p.label), class)
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(render_rows(&rows, spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use octocf::octagon::q_prime;

    #[test]
    fn nonpositive_scales_are_rejected() {
        assert!(RenderSpec::new(Rational::from_integer(0.into())).is_err());
        assert!(RenderSpec::new(Rational::new((-1).into(), 2.into())).is_err());
    }

    #[test]
    fn q_prime_has_three_labeled_quadrilaterals() {
        let svg =
            render_quadrangulation(&q_prime(Vec2::from_ints(0, 1)).unwrap(), "Q′", &RenderSpec::default()).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 3);
        for i in 1..=3 {
            assert!(svg.contains(&format!(">{i}</text>")));
        }
    }

    #[test]
    fn labels_can_be_hidden() {
        let spec = RenderSpec { show_labels: false, ..RenderSpec::default() };
        let svg = render_quadrangulation(&q_prime(Vec2::from_ints(0, 1)).unwrap(), "", &spec).unwrap();
        assert!(!svg.contains("wedge-label"));
    }
}
