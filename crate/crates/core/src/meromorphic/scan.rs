use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::cross_section::ConormalFamily;
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::quad::gauss_legendre;
use crate::scalar::C64;

/// Zero of `Delta` with its multiplicity from the argument principle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pole {
    pub z: C64,
    pub order: usize,
}

/// Closed rectangle `[x0, x1] x [y0, y1]` in the complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Rect { x0, x1, y0, y1 }
    }

    pub fn diameter(&self) -> f64 {
        (self.x1 - self.x0).hypot(self.y1 - self.y0)
    }

    pub fn center(&self) -> C64 {
        C64::new((self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0)
    }

    fn contains(&self, z: C64, slack: f64) -> bool {
        z.re >= self.x0 - slack && z.re <= self.x1 + slack && z.im >= self.y0 - slack && z.im <= self.y1 + slack
    }

    fn corners(&self) -> [C64; 4] {
        [
            C64::new(self.x0, self.y0),
            C64::new(self.x1, self.y0),
            C64::new(self.x1, self.y1),
            C64::new(self.x0, self.y1),
        ]
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ScanSettings {
    /// Extra width scanned beyond each line of the strip.
    pub margin: f64,
    /// Absolute tolerance per quadrature panel.
    pub quad_tol: f64,
    /// Spread below which several zeros count as one multiple zero, relative
    /// to `max(1, |z|)`.
    pub cluster_tol: f64,
    /// Box diameter below which a multi-zero box is accepted as a cluster.
    pub min_box: f64,
    pub newton_tol: f64,
    /// Points closer than this to a strip line count as lying on it.
    pub line_tol: f64,
    pub exec: Exec,
}

impl Default for ScanSettings {
    fn default() -> Self {
        ScanSettings {
            margin: 0.0537,
            quad_tol: 1e-10,
            cluster_tol: 1e-4,
            min_box: 1e-6,
            newton_tol: 1e-12,
            line_tol: 1e-9,
            exec: Exec::default(),
        }
    }
}

/// Off-centre split fractions; later ones are tried when a split line runs
/// too close to a zero.
const SPLITS: [f64; 5] = [0.5371, 0.4629, 0.6180, 0.3819, 0.5789];
const MAX_DEPTH: usize = 60;

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static GL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GL.get_or_init(|| gauss_legendre(16))
}

/// `int_a^b g(z) (z - c)^p dz` for `p = 0..=order`, adaptive Gauss-Legendre.
pub fn segment_moments<G>(g: &G, a: C64, b: C64, c: C64, order: usize, tol: f64) -> Result<Vec<C64>>
where
    G: Fn(C64) -> Result<C64> + ?Sized,
{
    let whole = panel(g, a, b, c, order)?;
    refine(g, a, b, c, order, tol, whole, 0)
}

fn panel<G>(g: &G, a: C64, b: C64, c: C64, order: usize) -> Result<Vec<C64>>
where
    G: Fn(C64) -> Result<C64> + ?Sized,
{
    let (x, w) = gl16();
    let half = (b - a) / 2.0;
    let mid = (a + b) / 2.0;
    let mut out = vec![C64::new(0.0, 0.0); order + 1];
    for (xi, wi) in x.iter().zip(w) {
        let z = mid + half * *xi;
        let mut v = g(z)? * half * *wi;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Contour(format!("contour too close to zero near {z}")));
        }
        for o in out.iter_mut() {
            *o += v;
            v *= z - c;
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn refine<G>(g: &G, a: C64, b: C64, c: C64, order: usize, tol: f64, whole: Vec<C64>, depth: usize) -> Result<Vec<C64>>
where
    G: Fn(C64) -> Result<C64> + ?Sized,
{
    let m = (a + b) / 2.0;
    let left = panel(g, a, m, c, order)?;
    let right = panel(g, m, b, c, order)?;
    let scale = ((a - c).norm().max((b - c).norm())).max(1.0);
    let err = (0..=order)
        .map(|p| (left[p] + right[p] - whole[p]).norm() / scale.powi(p as i32))
        .fold(0.0, f64::max);
    if err <= tol {
        return Ok(left.iter().zip(&right).map(|(l, r)| l + r).collect());
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Contour(format!("contour too close to zero near {m}")));
    }
    let l = refine(g, a, m, c, order, tol, left, depth + 1)?;
    let r = refine(g, m, b, c, order, tol, right, depth + 1)?;
    Ok(l.iter().zip(&r).map(|(x, y)| x + y).collect())
}

/// `(int g, int z g)` over one oriented edge.
type Edge = [C64; 2];

fn edge<G>(g: &G, a: C64, b: C64, tol: f64) -> Result<Edge>
where
    G: Fn(C64) -> Result<C64> + ?Sized,
{
    let v = segment_moments(g, a, b, C64::new(0.0, 0.0), 1, tol)?;
    Ok([v[0], v[1]])
}

fn sub(a: Edge, b: Edge) -> Edge {
    [a[0] - b[0], a[1] - b[1]]
}

/// Box with its edge integrals, horizontal edges oriented left to right and
/// vertical edges bottom to top.
#[derive(Clone, Copy, Debug)]
struct Cell {
    rect: Rect,
    bottom: Edge,
    top: Edge,
    left: Edge,
    right: Edge,
    depth: usize,
}

impl Cell {
    fn contour(&self) -> Edge {
        let mut out = [C64::new(0.0, 0.0); 2];
        for i in 0..2 {
            out[i] = self.bottom[i] + self.right[i] - self.top[i] - self.left[i];
        }
        let f = C64::new(0.0, 2.0 * PI);
        [out[0] / f, out[1] / f]
    }

    fn new<G>(g: &G, rect: Rect, tol: f64) -> Result<Self>
    where
        G: Fn(C64) -> Result<C64> + ?Sized,
    {
        let [c0, c1, c2, c3] = rect.corners();
        Ok(Cell {
            rect,
            bottom: edge(g, c0, c1, tol)?,
            right: edge(g, c1, c2, tol)?,
            top: edge(g, c3, c2, tol)?,
            left: edge(g, c0, c3, tol)?,
            depth: 0,
        })
    }

    fn split<G>(&self, g: &G, fraction: f64, tol: f64) -> Result<[Cell; 2]>
    where
        G: Fn(C64) -> Result<C64> + ?Sized,
    {
        let r = self.rect;
        let depth = self.depth + 1;
        if r.x1 - r.x0 >= r.y1 - r.y0 {
            let xs = r.x0 + fraction * (r.x1 - r.x0);
            let mid = edge(g, C64::new(xs, r.y0), C64::new(xs, r.y1), tol)?;
            let bl = edge(g, C64::new(r.x0, r.y0), C64::new(xs, r.y0), tol)?;
            let tl = edge(g, C64::new(r.x0, r.y1), C64::new(xs, r.y1), tol)?;
            Ok([
                Cell { rect: Rect::new(r.x0, xs, r.y0, r.y1), bottom: bl, top: tl, left: self.left, right: mid, depth },
                Cell {
                    rect: Rect::new(xs, r.x1, r.y0, r.y1),
                    bottom: sub(self.bottom, bl),
                    top: sub(self.top, tl),
                    left: mid,
                    right: self.right,
                    depth,
                },
            ])
        } else {
            let ys = r.y0 + fraction * (r.y1 - r.y0);
            let mid = edge(g, C64::new(r.x0, ys), C64::new(r.x1, ys), tol)?;
            let lb = edge(g, C64::new(r.x0, r.y0), C64::new(r.x0, ys), tol)?;
            let rb = edge(g, C64::new(r.x1, r.y0), C64::new(r.x1, ys), tol)?;
            Ok([
                Cell { rect: Rect::new(r.x0, r.x1, r.y0, ys), bottom: self.bottom, top: mid, left: lb, right: rb, depth },
                Cell {
                    rect: Rect::new(r.x0, r.x1, ys, r.y1),
                    bottom: mid,
                    top: self.top,
                    left: sub(self.left, lb),
                    right: sub(self.right, rb),
                    depth,
                },
            ])
        }
    }
}

fn winding(v: C64) -> Option<usize> {
    let k = v.re.round();
    if (v.re - k).abs() > 0.1 || v.im.abs() > 0.1 || k < 0.0 {
        None
    } else {
        Some(k as usize)
    }
}

enum Step {
    Done(Vec<Pole>),
    Split(Box<[Cell; 2]>),
}

fn newton<G>(g: &G, start: C64, rect: &Rect, tol: f64) -> C64
where
    G: Fn(C64) -> Result<C64> + ?Sized,
{
    let mut z = start;
    for _ in 0..60 {
        let Ok(v) = g(z) else { return z };
        if v.norm() == 0.0 || !v.re.is_finite() || !v.im.is_finite() {
            return z;
        }
        let dz = v.inv();
        z -= dz;
        if !rect.contains(z, rect.diameter()) {
            return start;
        }
        if dz.norm() <= tol * z.norm().max(1.0) {
            return z;
        }
    }
    z
}

fn central_moments<G>(g: &G, rect: &Rect, c: C64, order: usize, tol: f64) -> Result<Vec<C64>>
where
    G: Fn(C64) -> Result<C64> + ?Sized,
{
    let k = rect.corners();
    let mut acc = vec![C64::new(0.0, 0.0); order + 1];
    for i in 0..4 {
        let v = segment_moments(g, k[i], k[(i + 1) % 4], c, order, tol)?;
        for (a, b) in acc.iter_mut().zip(v) {
            *a += b;
        }
    }
    let f = C64::new(0.0, 2.0 * PI);
    Ok(acc.into_iter().map(|v| v / f).collect())
}

fn step<G>(g: &G, cell: &Cell, s: &ScanSettings) -> Result<Step>
where
    G: Fn(C64) -> Result<C64> + ?Sized,
{
    let [count, first] = cell.contour();
    let k = winding(count).ok_or_else(|| Error::Contour(format!("contour too close to zero: winding {count}")))?;
    match k {
        0 => Ok(Step::Done(Vec::new())),
        1 => Ok(Step::Done(vec![Pole { z: newton(g, first, &cell.rect, s.newton_tol), order: 1 }])),
        _ => {
            let c = first / k as f64;
            let diam = cell.rect.diameter();
            if diam <= 0.5 {
                let mu = central_moments(g, &cell.rect, c, k, s.quad_tol)?;
                let spread = (2..=k).map(|p| mu[p].norm().powf(1.0 / p as f64)).fold(0.0, f64::max);
                let c = c + mu[1] / k as f64;
                if spread < s.cluster_tol * c.norm().max(1.0) || diam <= s.min_box {
                    return Ok(Step::Done(vec![Pole { z: c, order: k }]));
                }
            }
            if cell.depth >= MAX_DEPTH {
                return Ok(Step::Done(vec![Pole { z: c, order: k }]));
            }
            let mut last = None;
            for f in SPLITS {
                match cell.split(g, f, s.quad_tol) {
                    Ok(children) if children.iter().all(|ch| winding(ch.contour()[0]).is_some()) => {
                        return Ok(Step::Split(Box::new(children)));
                    }
                    Ok(_) => last = Some(Error::Contour("contour too close to zero after splitting".into())),
                    Err(e) => last = Some(e),
                }
            }
            Err(last.expect("at least one split tried"))
        }
    }
}

/// All zeros of a function inside `rect`, given its logarithmic derivative `g`.
pub fn scan_rectangle<G>(g: &G, rect: Rect, settings: &ScanSettings) -> Result<Vec<Pole>>
where
    G: Fn(C64) -> Result<C64> + Sync + ?Sized,
{
    let root = Cell::new(g, rect, settings.quad_tol)?;
    let mut frontier = vec![root];
    let mut out = Vec::new();
    while !frontier.is_empty() {
        let steps = settings.exec.map(&frontier, |c| step(g, c, settings));
        let mut next = Vec::new();
        for s in steps {
            match s? {
                Step::Done(p) => out.extend(p),
                Step::Split(ch) => next.extend(*ch),
            }
        }
        frontier = next;
    }
    sort_poles(&mut out);
    Ok(out)
}

pub fn sort_poles(p: &mut [Pole]) {
    p.sort_by(|a, b| a.z.re.total_cmp(&b.z.re).then(a.z.im.total_cmp(&b.z.im)));
}

/// Zeros of `Delta` in the open strip `a < Re z < b`, `|Im z| <= h`, together
/// with those found in the scanned margin around it.
#[derive(Clone, Debug, PartialEq)]
pub struct StripScan {
    pub strip: (f64, f64),
    pub imag_box: f64,
    pub rect: Rect,
    pub poles: Vec<Pole>,
    /// Zeros within `line_tol` of a strip line, with that line.
    pub on_lines: Vec<(Pole, f64)>,
    pub all: Vec<Pole>,
}

/// Scans the strip with a margin, retrying with a perturbed outer contour when
/// it passes too close to a zero.
pub fn scan_strip<G>(g: &G, strip: (f64, f64), imag_box: f64, settings: &ScanSettings) -> Result<StripScan>
where
    G: Fn(C64) -> Result<C64> + Sync + ?Sized,
{
    let (a, b) = strip;
    let mut margin = settings.margin;
    let mut height = imag_box + 0.0123;
    let mut last = None;
    for _ in 0..4 {
        let rect = Rect::new(a - margin, b + margin, -height, height);
        match scan_rectangle(g, rect, settings) {
            Ok(all) => {
                let mut on_lines = Vec::new();
                for p in &all {
                    for line in [a, b] {
                        if (p.z.re - line).abs() <= settings.line_tol && p.z.im.abs() <= imag_box {
                            on_lines.push((*p, line));
                        }
                    }
                }
                let poles = all
                    .iter()
                    .copied()
                    .filter(|p| p.z.re > a + settings.line_tol && p.z.re < b - settings.line_tol && p.z.im.abs() <= imag_box)
                    .collect();
                return Ok(StripScan { strip, imag_box, rect, poles, on_lines, all });
            }
            Err(e) => last = Some(e),
        }
        margin *= 1.618;
        height += 0.0071;
    }
    Err(last.expect("at least one scan tried"))
}

/// Poles of the inverted family in `a < Re z < b`, `|Im z| <= h`.
/// A pole on either line is an error.
pub fn locate_poles(f: &ConormalFamily, strip: (f64, f64), imag_box: f64, settings: &ScanSettings) -> Result<StripScan> {
    let scan = scan_strip(&|z| f.log_derivative(z), strip, imag_box, settings)?;
    match scan.on_lines.first() {
        Some(&(p, line)) => Err(Error::WeightOnPole { re: p.z.re, im: p.z.im, line }),
        None => Ok(scan),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_log_derivative(roots: Vec<C64>) -> impl Fn(C64) -> Result<C64> + Sync {
        move |z| Ok(roots.iter().map(|r| (z - r).inv()).sum())
    }

    #[test]
    fn finds_simple_roots() {
        let roots = vec![C64::new(0.3, 0.2), C64::new(-1.1, 0.0), C64::new(2.0, -3.0), C64::new(0.31, 0.2)];
        let g = poly_log_derivative(roots.clone());
        let found = scan_rectangle(&g, Rect::new(-4.0, 4.0, -5.0, 5.0), &ScanSettings::default()).unwrap();
        assert_eq!(found.len(), 4);
        for r in roots {
            assert!(found.iter().any(|p| (p.z - r).norm() < 1e-10 && p.order == 1), "{r}");
        }
    }

    #[test]
    fn merges_a_double_root() {
        let g = poly_log_derivative(vec![C64::new(0.5, 0.0), C64::new(0.5, 0.0), C64::new(1.5, 1.0)]);
        let found = scan_rectangle(&g, Rect::new(-2.0, 3.0, -2.0, 2.0), &ScanSettings::default()).unwrap();
        assert_eq!(found.len(), 2);
        assert_eq!(found[0].order, 2);
        assert!((found[0].z - 0.5).norm() < 1e-10);
    }

    #[test]
    fn strip_filters_and_flags_lines() {
        let g = poly_log_derivative(vec![C64::new(0.0, 0.0), C64::new(2.0, 0.0)]);
        let s = ScanSettings::default();
        let scan = scan_strip(&g, (-1.0, 1.0), 3.0, &s).unwrap();
        assert_eq!(scan.poles.len(), 1);
        let scan = scan_strip(&g, (0.0, 1.0), 3.0, &s).unwrap();
        assert!(scan.poles.is_empty());
        assert_eq!(scan.on_lines.len(), 1);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let g = poly_log_derivative(vec![C64::new(0.1, 0.1), C64::new(-0.7, 0.4)]);
        let r = Rect::new(-1.0, 1.0, -1.0, 1.0);
        let a = scan_rectangle(&g, r, &ScanSettings { exec: Exec::Sequential, ..Default::default() }).unwrap();
        let b = scan_rectangle(&g, r, &ScanSettings { exec: Exec::Parallel, ..Default::default() }).unwrap();
        assert_eq!(a, b);
    }
}
