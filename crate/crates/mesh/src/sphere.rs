//! Triangulation of the Riemann sphere adapted to the twelve branch points.
//!
//! Each disc (`|xi| <= 1` in the plane chart, `|w| <= 1` in the inverted
//! chart) is cut into six sectors of angle `pi/3`, each holding one branch
//! point. A sector is split into three curved triangles with the branch
//! point as common apex; their bases are the two radial rays and the arc.
//! Rows run from the apex at parameter `(j/n)^2`, which gives edges of
//! roughly even length on sheets where `R ~ (xi - b)^(-1/2)`.
//!
//! The row count is odd so that no arc node falls on `e^{(2m+1) i pi/6}`,
//! where two roots of the cubic coincide without branching; a vertex there
//! could not be assigned a sheet by its root value.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use tpms_contour::Chart;
use tpms_weierstrass::Weierstrass;

/// Chart index used in keys: 0 plane, 1 inverted.
pub(crate) fn chart_index(chart: Chart) -> u8 {
    match chart {
        Chart::Plane => 0,
        Chart::Inverted => 1,
    }
}

/// Combinatorial identity of a sphere vertex, independent of rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Key {
    Center(u8),
    Branch(u8, usize),
    /// Point `i/n` along ray `r` (angle `r pi/3`).
    Ray(u8, usize, usize),
    /// Unit-circle point at plane angle `k pi / (3n)`.
    Circle(usize),
    /// Row `j` on the segment from the apex of sector `s` to its corner `c`.
    Side(u8, usize, usize, usize),
    Inner(u8, usize, usize, usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereVertex {
    /// Chart whose coordinate is stored; the plane chart for points with
    /// `|xi| <= 1`.
    pub chart: Chart,
    pub z: Complex64,
    /// Branch point index when the vertex is one (same index in both charts).
    pub branch: Option<usize>,
    pub on_circle: bool,
}

impl SphereVertex {
    /// Coordinate in `chart`.
    pub fn coordinate(&self, chart: Chart) -> Complex64 {
        if chart == self.chart {
            self.z
        } else {
            self.z.inv()
        }
    }

    /// Plane coordinate; infinite for the centre of the inverted chart.
    pub fn xi(&self) -> Complex64 {
        match self.chart {
            Chart::Plane => self.z,
            Chart::Inverted if self.z == Complex64::new(0.0, 0.0) => Complex64::new(f64::INFINITY, f64::INFINITY),
            Chart::Inverted => self.z.inv(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SphereMesh {
    pub n: usize,
    pub vertices: Vec<SphereVertex>,
    pub triangles: Vec<[usize; 3]>,
    pub triangle_chart: Vec<Chart>,
    /// Sector 0..5 in the plane chart, 6..11 in the inverted chart.
    pub triangle_sector: Vec<usize>,
    pub(crate) keys: HashMap<Key, usize>,
    pub(crate) vertex_keys: Vec<Key>,
}

/// Number of circle points per full turn.
fn circle_points(n: usize) -> usize {
    6 * n
}

/// Odd row count used for a requested resolution.
pub fn rows_for(resolution: usize) -> usize {
    resolution.max(1) | 1
}

impl SphereMesh {
    /// Builds the triangulation with [`rows_for`]`(resolution)` rows per
    /// curved triangle.
    pub fn new(f: &Weierstrass, resolution: usize) -> Self {
        let n = rows_for(resolution);
        let mut mesh = Self {
            n,
            vertices: Vec::new(),
            triangles: Vec::new(),
            triangle_chart: Vec::new(),
            triangle_sector: Vec::new(),
            keys: HashMap::new(),
            vertex_keys: Vec::new(),
        };
        let branch = f.branch_points().points;
        let circle = circle_points(n);
        for ch in [Chart::Plane, Chart::Inverted] {
            let c = chart_index(ch);
            // Circle index of a chart angle index.
            let circ = |k: usize| -> Key {
                let k = k % circle;
                Key::Circle(if ch == Chart::Plane { k } else { (circle - k) % circle })
            };
            for s in 0..6 {
                let apex = branch[s];
                let a0 = s as f64 * PI / 3.0;
                let corners = [
                    (Key::Center(c), Complex64::new(0.0, 0.0)),
                    (circ(n * s), Complex64::from_polar(1.0, a0)),
                    (circ(n * (s + 1)), Complex64::from_polar(1.0, a0 + PI / 3.0)),
                ];
                for sub in 0..3 {
                    let next = (sub + 1) % 3;
                    // Base point and key at fraction i/n.
                    let base = |i: usize| -> (Key, Complex64) {
                        if i == 0 {
                            return corners[sub];
                        }
                        if i == n {
                            return corners[next];
                        }
                        let u = i as f64 / n as f64;
                        match sub {
                            0 => (Key::Ray(c, s, i), Complex64::from_polar(u, a0)),
                            1 => (circ(n * s + i), Complex64::from_polar(1.0, a0 + u * PI / 3.0)),
                            _ => (Key::Ray(c, (s + 1) % 6, n - i), Complex64::from_polar(1.0 - u, a0 + PI / 3.0)),
                        }
                    };
                    let point = |j: usize, i: usize| -> (Key, Complex64) {
                        if j == 0 {
                            return (Key::Branch(c, s), apex);
                        }
                        if j == n {
                            return base(i);
                        }
                        let sj = (j as f64 / n as f64).powi(2);
                        let u = i as f64 / j as f64;
                        let key = if i == 0 {
                            Key::Side(c, s, sub, j)
                        } else if i == j {
                            Key::Side(c, s, next, j)
                        } else {
                            Key::Inner(c, s, sub, j, i)
                        };
                        // Interpolate towards the base point at the same fraction.
                        let b = if sub == 1 {
                            Complex64::from_polar(1.0, a0 + u * PI / 3.0)
                        } else {
                            corners[sub].1 + (corners[next].1 - corners[sub].1) * u
                        };
                        (key, apex + (b - apex) * sj)
                    };
                    let mut id = |j: usize, i: usize| -> usize {
                        let (key, z) = point(j, i);
                        mesh.vertex(key, ch, z, if j == 0 { Some(s) } else { None })
                    };
                    let mut tris = Vec::new();
                    for j in 0..n {
                        for i in 0..=j {
                            tris.push([id(j, i), id(j + 1, i), id(j + 1, i + 1)]);
                            if i < j {
                                tris.push([id(j, i), id(j + 1, i + 1), id(j, i + 1)]);
                            }
                        }
                    }
                    for t in tris {
                        mesh.push_triangle(t, ch, s + 6 * c as usize);
                    }
                }
            }
        }
        mesh
    }

    fn vertex(&mut self, key: Key, chart: Chart, z: Complex64, branch: Option<usize>) -> usize {
        if let Some(&id) = self.keys.get(&key) {
            return id;
        }
        let (chart, z, on_circle) = match key {
            Key::Circle(k) => (
                Chart::Plane,
                Complex64::from_polar(1.0, k as f64 * PI / (3 * self.n) as f64),
                true,
            ),
            _ => (chart, z, false),
        };
        let id = self.vertices.len();
        self.vertices.push(SphereVertex {
            chart,
            z,
            branch,
            on_circle,
        });
        self.keys.insert(key, id);
        self.vertex_keys.push(key);
        id
    }

    fn push_triangle(&mut self, t: [usize; 3], chart: Chart, sector: usize) {
        let [a, b, c] = t.map(|v| self.vertices[v].coordinate(chart));
        let signed = ((b - a).conj() * (c - a)).im;
        let t = if signed >= 0.0 { t } else { [t[0], t[2], t[1]] };
        self.triangles.push(t);
        self.triangle_chart.push(chart);
        self.triangle_sector.push(sector);
    }

    pub(crate) fn lookup(&self, key: Key) -> Option<usize> {
        self.keys.get(&key).copied()
    }

    pub(crate) fn key(&self, v: usize) -> Key {
        self.vertex_keys[v]
    }

    /// Unique edges with the chart they are integrated in: the plane chart
    /// unless an endpoint lies strictly inside the inverted disc.
    pub fn edges(&self) -> Vec<(usize, usize, Chart)> {
        let mut seen = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                seen.entry(key).or_insert_with(|| {
                    let inverted = [a, b].iter().any(|&v| self.vertices[v].chart == Chart::Inverted);
                    if inverted {
                        Chart::Inverted
                    } else {
                        Chart::Plane
                    }
                });
            }
        }
        let mut out: Vec<(usize, usize, Chart)> = seen.into_iter().map(|((a, b), c)| (a, b, c)).collect();
        out.sort_by_key(|e| (e.0, e.1));
        out
    }
}
