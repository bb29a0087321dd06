//! SVG pictures of a subdivision next to its dual tropical curve.
//!
//! All geometry stays in exact rationals; coordinates are converted to
//! six-place decimals only when written out, so equal inputs give equal
//! bytes.

use std::fmt::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use tcnkit::dual::{dualize, skeletonize, StrandEnd};
use tcnkit::lattice::{orient, LatticePoint};
use tcnkit::rational::to_fixed;
use tcnkit::regularity::HeightCertificate;
use tcnkit::subdivision::{CellKind, Subdivision};
use tcnkit::{Error, Result};

const MARGIN: i64 = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderSpec {
    /// Pixels per lattice unit in the subdivision panel; the curve panel
    /// gets the same size.
    pub scale: u32,
    pub subdivision: bool,
    pub curve: bool,
    pub rays: bool,
    pub nodes: bool,
    pub skeleton: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec { scale: 40, subdivision: true, curve: true, rays: true, nodes: true, skeleton: true }
    }
}

type Point = (BigRational, BigRational);

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn lattice(p: LatticePoint) -> Point {
    (int(p.x), int(p.y))
}

fn num(q: &BigRational) -> String {
    to_fixed(q, 6)
}

/// Affine map from model coordinates to panel pixels, flipping `y`.
struct Frame {
    lo: Point,
    hi_y: BigRational,
    scale: BigRational,
    offset_x: BigRational,
}

impl Frame {
    fn fit(points: &[Point], scale: BigRational, offset_x: i64) -> Frame {
        let min = |f: fn(&Point) -> &BigRational| points.iter().map(f).min().cloned().unwrap_or_else(BigRational::zero);
        let max = |f: fn(&Point) -> &BigRational| points.iter().map(f).max().cloned().unwrap_or_else(BigRational::zero);
        Frame { lo: (min(|p| &p.0), min(|p| &p.1)), hi_y: max(|p| &p.1), scale, offset_x: int(offset_x + MARGIN) }
    }

    fn map(&self, p: &Point) -> (String, String) {
        let x = (&p.0 - &self.lo.0) * &self.scale + &self.offset_x;
        let y = (&self.hi_y - &p.1) * &self.scale + int(MARGIN);
        (num(&x), num(&y))
    }
}

fn extent(points: &[Point]) -> (BigRational, BigRational) {
    let span = |f: fn(&Point) -> &BigRational| {
        let lo = points.iter().map(f).min().cloned().unwrap_or_else(BigRational::zero);
        let hi = points.iter().map(f).max().cloned().unwrap_or_else(BigRational::zero);
        hi - lo
    };
    (span(|p| &p.0), span(|p| &p.1))
}

/// Outward normal of the boundary segment `(a, b)`.
fn outward(s: &Subdivision, a: LatticePoint, b: LatticePoint) -> (i64, i64) {
    let d = b - a;
    let n = (d.y, -d.x);
    let inside = s.polygon().vertices().iter().copied().find(|&v| orient(a, b, v) != 0).expect("polygon is 2-dimensional");
    if n.0 * (inside.x - a.x) + n.1 * (inside.y - a.y) > 0 {
        (-n.0, -n.1)
    } else {
        n
    }
}

struct Piece {
    from: Point,
    to: Point,
    class: &'static str,
}

/// Draws `s` on the lattice and, to its right, its tropical curve with the
/// vertices placed at the tie points of `cert`. Fails if `cert` does not
/// induce `s`.
pub fn render_svg(s: &Subdivision, cert: &HeightCertificate, spec: &RenderSpec) -> Result<String> {
    if spec.scale == 0 {
        return Err(Error::InvalidArgument("render scale must be positive".into()));
    }
    cert.verify(s)?;
    let curve = dualize(s, Some(cert))?;
    let pos = curve.positions.as_ref().expect("heights were supplied");
    let skeletal = skeletonize(&curve).skeletal_strands;

    // curve pieces before rays, so that the ray length can follow the extent
    let mut finite: Vec<Point> = pos.clone();
    if finite.is_empty() {
        finite.push((BigRational::zero(), BigRational::zero()));
    }
    let (w, h) = extent(&finite);
    let ray_len = std::cmp::max(BigRational::one(), std::cmp::max(w, h) / int(2));
    let mut pieces = Vec::new();
    for (i, st) in curve.strands.iter().enumerate() {
        let mut chain: Vec<Point> = Vec::new();
        if let StrandEnd::Vertex(t) = st.ends[0] {
            chain.push(pos[curve.triangles[t]].clone());
        }
        chain.extend(st.nodes.iter().map(|&n| pos[curve.nodes[n]].clone()));
        if let StrandEnd::Vertex(t) = st.ends[1] {
            chain.push(pos[curve.triangles[t]].clone());
        }
        let class = if skeletal.contains(&i) { "skeleton" } else { "edge" };
        for pair in chain.windows(2) {
            pieces.push(Piece { from: pair[0].clone(), to: pair[1].clone(), class });
        }
        for (k, end) in st.ends.iter().enumerate() {
            if let StrandEnd::Boundary(a, b) = *end {
                let start = if k == 0 { chain[0].clone() } else { chain[chain.len() - 1].clone() };
                let (nx, ny) = outward(s, a, b);
                let t = &ray_len / int(nx.abs().max(ny.abs()));
                let to = (&start.0 + int(nx) * &t, &start.1 + int(ny) * &t);
                pieces.push(Piece { from: start, to, class: "ray" });
            }
        }
    }

    let scale = int(spec.scale as i64);
    let (lo, hi) = s.polygon().bounding_box();
    let lattice_w = (hi.x - lo.x) * spec.scale as i64;
    let lattice_h = (hi.y - lo.y) * spec.scale as i64;
    let side = lattice_w.max(lattice_h).max(spec.scale as i64);

    let mut drawn: Vec<Point> = finite.clone();
    if spec.rays {
        drawn.extend(pieces.iter().filter(|p| p.class == "ray").map(|p| p.to.clone()));
    }
    let (cw, ch) = extent(&drawn);
    let span = std::cmp::max(cw, ch);
    let curve_scale = if span.is_positive() { int(side) / span } else { scale.clone() };

    let panels = [spec.subdivision, spec.curve];
    let first_w = if spec.subdivision { lattice_w } else { 0 };
    let curve_x = if spec.subdivision { first_w + 2 * MARGIN } else { 0 };
    let total_w = match panels {
        [true, true] => curve_x + side + 2 * MARGIN,
        [true, false] => lattice_w + 2 * MARGIN,
        _ => side + 2 * MARGIN,
    };
    let total_h = lattice_h.max(if spec.curve { side } else { 0 }) + 2 * MARGIN;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_w}" height="{total_h}" viewBox="0 0 {total_w} {total_h}">"#
    );
    out.push_str(concat!(
        "<style>",
        ".cell{fill:none;stroke:#444;stroke-width:1}",
        ".parallelogram{fill:#ddd}",
        ".point{fill:#000}",
        ".edge{stroke:#06c;stroke-width:1.5}",
        ".skeleton{stroke:#c30;stroke-width:2.5}",
        ".ray{stroke:#06c;stroke-width:1;stroke-dasharray:4 3}",
        ".node{fill:none;stroke:#000;stroke-width:1.5}",
        "</style>\n"
    ));

    if spec.subdivision {
        let corners: Vec<Point> = s.polygon().vertices().iter().map(|&p| lattice(p)).collect();
        let frame = Frame::fit(&corners, scale.clone(), 0);
        out.push_str("<g class=\"subdivision\">\n");
        for c in s.cells() {
            let pts: Vec<String> = c
                .vertices()
                .iter()
                .map(|&p| {
                    let (x, y) = frame.map(&lattice(p));
                    format!("{x},{y}")
                })
                .collect();
            let class = match c.kind() {
                CellKind::Triangle => "cell",
                CellKind::Parallelogram if spec.nodes => "cell parallelogram",
                CellKind::Parallelogram => "cell",
            };
            let _ = writeln!(out, r#"<polygon class="{class}" points="{}"/>"#, pts.join(" "));
        }
        for p in s.polygon().lattice_points() {
            let (x, y) = frame.map(&lattice(p));
            let _ = writeln!(out, r#"<circle class="point" cx="{x}" cy="{y}" r="2"/>"#);
        }
        out.push_str("</g>\n");
    }

    if spec.curve {
        let frame = Frame::fit(&drawn, curve_scale, curve_x);
        out.push_str("<g class=\"curve\">\n");
        for p in &pieces {
            let class = match p.class {
                "ray" if !spec.rays => continue,
                "skeleton" if !spec.skeleton => "edge",
                c => c,
            };
            let (x1, y1) = frame.map(&p.from);
            let (x2, y2) = frame.map(&p.to);
            let _ = writeln!(out, r#"<line class="{class}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#);
        }
        if spec.nodes {
            for &c in &curve.nodes {
                let (x, y) = frame.map(&pos[c]);
                let _ = writeln!(out, r#"<circle class="node" cx="{x}" cy="{y}" r="5"/>"#);
            }
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}
