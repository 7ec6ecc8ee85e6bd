//! Where a computer-algebra system would put the branch cuts of the closed
//! form. Only used to draw pictures; continuation never looks at these.

use std::collections::HashMap;
use std::io::{self, Write};

use num_complex::Complex64;
use tpms_weierstrass::{FamilyParams, Weierstrass};

/// The three cut families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CutFamily {
    /// `1 + xi^6 + sqrt(g)` real and negative.
    CubeRootPlus,
    /// `1 + xi^6 - sqrt(g)` real and negative.
    CubeRootMinus,
    /// `g` real and negative.
    SquareRoot,
}

impl CutFamily {
    pub const ALL: [CutFamily; 3] = [
        CutFamily::CubeRootPlus,
        CutFamily::CubeRootMinus,
        CutFamily::SquareRoot,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CutFamily::CubeRootPlus => "cbrt_plus",
            CutFamily::CubeRootMinus => "cbrt_minus",
            CutFamily::SquareRoot => "sqrt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub min: Complex64,
    pub max: Complex64,
}

impl Rect {
    pub fn new(min: Complex64, max: Complex64) -> Self {
        Self { min, max }
    }

    pub fn is_empty(&self) -> bool {
        !(self.max.re > self.min.re && self.max.im > self.min.im)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.min.re && z.re <= self.max.re && z.im >= self.min.im && z.im <= self.max.im
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutPolyline {
    pub family: CutFamily,
    pub points: Vec<Complex64>,
}

/// Grid edge between two lattice nodes, keyed so neighbouring cells agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct EdgeKey(usize, usize, bool);

fn sample(f: &Weierstrass, family: CutFamily, z: Complex64) -> (Complex64, Complex64) {
    let g = f.g(z);
    let s = g.sqrt();
    let z3 = z * z * z;
    let base = 1.0 + z3 * z3;
    match family {
        CutFamily::CubeRootPlus => (base + s, s),
        CutFamily::CubeRootMinus => (base - s, s),
        CutFamily::SquareRoot => (g, Complex64::new(1.0, 0.0)),
    }
}

/// Contours `Im h = 0` with `Re h < 0` for each family, by marching squares
/// on a `resolution x resolution` grid.
pub fn branch_cut_locus(params: &FamilyParams, region: Rect, resolution: usize) -> Vec<CutPolyline> {
    if region.is_empty() || resolution == 0 {
        return Vec::new();
    }
    let f = Weierstrass::new(*params);
    let n = resolution;
    let dx = (region.max.re - region.min.re) / n as f64;
    let dy = (region.max.im - region.min.im) / n as f64;
    let node = |i: usize, j: usize| Complex64::new(region.min.re + i as f64 * dx, region.min.im + j as f64 * dy);
    let mut out = Vec::new();
    for family in CutFamily::ALL {
        let mut vals = vec![(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); (n + 1) * (n + 1)];
        for j in 0..=n {
            for i in 0..=n {
                vals[j * (n + 1) + i] = sample(&f, family, node(i, j));
            }
        }
        let at = |i: usize, j: usize| vals[j * (n + 1) + i];
        // Crossing on the edge from (i, j) along x (`true`) or y.
        let crossing = |i: usize, j: usize, horizontal: bool| -> Option<Complex64> {
            let (i2, j2) = if horizontal { (i + 1, j) } else { (i, j + 1) };
            let (h0, s0) = at(i, j);
            let (h1, s1) = at(i2, j2);
            // The square root flipped sign between the nodes: h is not
            // continuous across this edge.
            if (s0 - s1).norm() > (s0 + s1).norm() {
                return None;
            }
            if (h0.im < 0.0) == (h1.im < 0.0) {
                return None;
            }
            let t = h0.im / (h0.im - h1.im);
            if h0.re + t * (h1.re - h0.re) >= 0.0 {
                return None;
            }
            Some(node(i, j) + (node(i2, j2) - node(i, j)) * t)
        };
        let mut points: HashMap<EdgeKey, Complex64> = HashMap::new();
        let mut links: HashMap<EdgeKey, Vec<EdgeKey>> = HashMap::new();
        for j in 0..n {
            for i in 0..n {
                let edges = [
                    EdgeKey(i, j, true),
                    EdgeKey(i + 1, j, false),
                    EdgeKey(i, j + 1, true),
                    EdgeKey(i, j, false),
                ];
                let hits: Vec<EdgeKey> = edges
                    .into_iter()
                    .filter(|e| {
                        if let Some(p) = crossing(e.0, e.1, e.2) {
                            points.insert(*e, p);
                            true
                        } else {
                            false
                        }
                    })
                    .collect();
                for pair in hits.chunks(2) {
                    if let [a, b] = pair {
                        links.entry(*a).or_default().push(*b);
                        links.entry(*b).or_default().push(*a);
                    }
                }
            }
        }
        out.extend(chain(&links, &points).into_iter().map(|pts| CutPolyline { family, points: pts }));
    }
    out
}

fn chain(links: &HashMap<EdgeKey, Vec<EdgeKey>>, points: &HashMap<EdgeKey, Complex64>) -> Vec<Vec<Complex64>> {
    let mut keys: Vec<EdgeKey> = links.keys().copied().collect();
    keys.sort_by_key(|k| (k.1, k.0, k.2));
    // Start from ends first so open curves come out whole.
    keys.sort_by_key(|k| links[k].len() != 1);
    let mut used: HashMap<(EdgeKey, EdgeKey), ()> = HashMap::new();
    let key = |a: EdgeKey, b: EdgeKey| {
        if (a.1, a.0, a.2) <= (b.1, b.0, b.2) {
            (a, b)
        } else {
            (b, a)
        }
    };
    let mut out = Vec::new();
    for start in keys {
        for &first in &links[&start] {
            if used.contains_key(&key(start, first)) {
                continue;
            }
            let mut line = vec![points[&start]];
            let (mut prev, mut cur) = (start, first);
            loop {
                used.insert(key(prev, cur), ());
                line.push(points[&cur]);
                let next = links[&cur]
                    .iter()
                    .copied()
                    .find(|&n| !used.contains_key(&key(cur, n)));
                match next {
                    Some(n) => {
                        prev = cur;
                        cur = n;
                    }
                    None => break,
                }
            }
            out.push(line);
        }
    }
    out
}

/// CSV with columns `family,re,im`, one row per polyline vertex.
pub fn write_cut_csv<W: Write>(mut w: W, cuts: &[CutPolyline]) -> io::Result<()> {
    writeln!(w, "family,re,im")?;
    for cut in cuts {
        for p in &cut.points {
            writeln!(w, "{},{:.12},{:.12}", cut.family.name(), p.re, p.im)?;
        }
    }
    Ok(())
}
