//! Exact convex hulls of rational point sets in three dimensions.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_traits::{Signed, Zero};

use crate::rational::Rational;

pub type Point3 = [Rational; 3];

pub fn sub(a: &Point3, b: &Point3) -> Point3 {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

pub fn add(a: &Point3, b: &Point3) -> Point3 {
    [&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2]]
}

pub fn dot(a: &Point3, b: &Point3) -> Rational {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

pub fn cross(a: &Point3, b: &Point3) -> Point3 {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn scale(a: &Point3, k: &Rational) -> Point3 {
    [&a[0] * k, &a[1] * k, &a[2] * k]
}

fn is_zero(a: &Point3) -> bool {
    a.iter().all(Zero::is_zero)
}

/// `det[b - a, c - a, d - a]`.
pub fn orient(a: &Point3, b: &Point3, c: &Point3, d: &Point3) -> Rational {
    dot(&cross(&sub(b, a), &sub(c, a)), &sub(d, a))
}

/// Positive multiple of `v` whose first non-zero entry is `±1`.
fn normalize(v: &Point3) -> Point3 {
    let lead = v
        .iter()
        .find(|x| !x.is_zero())
        .expect("non-zero vector")
        .abs();
    [&v[0] / &lead, &v[1] / &lead, &v[2] / &lead]
}

/// A facet plane `normal · x = offset` with `normal` pointing outward, and
/// the hull vertices on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: Point3,
    pub offset: Rational,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hull3 {
    /// Distinct input points, in first-seen order.
    pub points: Vec<Point3>,
    /// Affine dimension of the point set.
    pub dim: usize,
    /// Indices into `points`; ascending, except for planar hulls where they
    /// follow the polygon.
    pub vertices: Vec<usize>,
    /// Only for full-dimensional hulls.
    pub facets: Vec<Facet>,
    /// Edges as vertex pairs; full-dimensional hulls only.
    pub edges: Vec<(usize, usize)>,
    plane_normal: Option<Point3>,
}

impl Hull3 {
    pub fn new(input: &[Point3]) -> Hull3 {
        let mut seen = HashSet::new();
        let points: Vec<Point3> = input.iter().filter(|p| seen.insert(*p)).cloned().collect();
        let mut hull = Hull3 {
            points,
            dim: 0,
            vertices: Vec::new(),
            facets: Vec::new(),
            edges: Vec::new(),
            plane_normal: None,
        };
        if hull.points.is_empty() {
            return hull;
        }
        let p = &hull.points;
        let i1 = (1..p.len()).find(|&i| p[i] != p[0]);
        let Some(i1) = i1 else {
            hull.vertices = vec![0];
            return hull;
        };
        let dir = sub(&p[i1], &p[0]);
        let i2 = (1..p.len()).find(|&i| !is_zero(&cross(&dir, &sub(&p[i], &p[0]))));
        let Some(i2) = i2 else {
            hull.dim = 1;
            hull.vertices = collinear_extremes(p, &dir);
            return hull;
        };
        let normal = cross(&dir, &sub(&p[i2], &p[0]));
        let i3 = (1..p.len()).find(|&i| !dot(&normal, &sub(&p[i], &p[0])).is_zero());
        let Some(i3) = i3 else {
            hull.dim = 2;
            hull.vertices = planar_hull(p, &normal);
            hull.plane_normal = Some(normal);
            return hull;
        };
        hull.dim = 3;
        let tris = incremental(p, [0, i1, i2, i3]);
        hull.finish_3d(&tris);
        hull
    }

    fn finish_3d(&mut self, tris: &[[usize; 3]]) {
        let p = &self.points;
        // distinct outward planes of the triangulated surface
        let mut planes: BTreeMap<Point3, Rational> = BTreeMap::new();
        let mut incident: BTreeMap<usize, BTreeSet<Point3>> = BTreeMap::new();
        for t in tris {
            let n = normalize(&cross(&sub(&p[t[1]], &p[t[0]]), &sub(&p[t[2]], &p[t[0]])));
            planes.insert(n.clone(), dot(&n, &p[t[0]]));
            for &v in t {
                incident.entry(v).or_default().insert(n.clone());
            }
        }
        self.vertices = incident
            .iter()
            .filter(|(_, normals)| rank(normals) == 3)
            .map(|(&v, _)| v)
            .collect();
        self.facets = planes
            .into_iter()
            .map(|(normal, offset)| {
                let vertices = self
                    .vertices
                    .iter()
                    .copied()
                    .filter(|&v| dot(&normal, &p[v]) == offset)
                    .collect();
                Facet {
                    normal,
                    offset,
                    vertices,
                }
            })
            .collect();
        let mut edges = BTreeSet::new();
        for (i, f) in self.facets.iter().enumerate() {
            for g in &self.facets[i + 1..] {
                let common: Vec<usize> = f
                    .vertices
                    .iter()
                    .copied()
                    .filter(|v| g.vertices.contains(v))
                    .collect();
                if common.len() >= 2 {
                    edges.insert((common[0], *common.last().unwrap()));
                }
            }
        }
        self.edges = edges.into_iter().collect();
    }

    pub fn vertex_points(&self) -> Vec<Point3> {
        let mut v: Vec<Point3> = self
            .vertices
            .iter()
            .map(|&i| self.points[i].clone())
            .collect();
        v.sort();
        v
    }

    pub fn is_vertex(&self, q: &Point3) -> bool {
        self.vertices.iter().any(|&i| &self.points[i] == q)
    }

    /// `(φ0, φ1, φ2)` for full-dimensional hulls.
    pub fn face_counts(&self) -> Option<(usize, usize, usize)> {
        (self.dim == 3).then_some((self.vertices.len(), self.edges.len(), self.facets.len()))
    }

    /// A direction `c` with `c · v > c · q` for every other input point `q`.
    pub fn exposing_direction(&self, v: usize) -> Option<Point3> {
        if !self.vertices.contains(&v) {
            return None;
        }
        let p = &self.points;
        let zero = || [Rational::zero(), Rational::zero(), Rational::zero()];
        let c = match self.dim {
            0 => zero(),
            1 => {
                let other = self.vertices.iter().find(|&&w| w != v)?;
                sub(&p[v], &p[*other])
            }
            2 => {
                let normal = self.plane_normal.as_ref()?;
                let k = self.vertices.len();
                let pos = self.vertices.iter().position(|&w| w == v)?;
                // in-plane outward normals of the two polygon edges at v
                let centroid = scale(
                    &self
                        .vertices
                        .iter()
                        .fold(zero(), |acc, &w| add(&acc, &p[w])),
                    &Rational::new(1.into(), (k as i64).into()),
                );
                let mut c = zero();
                for w in [
                    self.vertices[(pos + 1) % k],
                    self.vertices[(pos + k - 1) % k],
                ] {
                    let mut out = cross(&sub(&p[w], &p[v]), normal);
                    if dot(&out, &sub(&centroid, &p[v])).is_positive() {
                        out = scale(&out, &Rational::from_integer((-1).into()));
                    }
                    c = add(&c, &out);
                }
                c
            }
            _ => self
                .facets
                .iter()
                .filter(|f| f.vertices.contains(&v))
                .fold(zero(), |acc, f| add(&acc, &f.normal)),
        };
        let exposes = |c: &Point3| {
            let cv = dot(c, &p[v]);
            p.iter().enumerate().all(|(i, q)| i == v || dot(c, q) < cv)
        };
        if exposes(&c) {
            return Some(c);
        }
        // deterministic perturbations, in case of a degenerate sum
        for k in 1..64u32 {
            let eps = Rational::new(1.into(), num_bigint::BigInt::from(2u32).pow(k));
            for d in [[1, 2, 3], [3, -1, 2], [-2, 3, 1]] {
                let dir: Point3 = d.map(|x| Rational::from_integer(x.into()) * &eps);
                let cand = add(&c, &dir);
                if exposes(&cand) {
                    return Some(cand);
                }
            }
        }
        None
    }
}

fn rank(normals: &BTreeSet<Point3>) -> usize {
    let ns: Vec<&Point3> = normals.iter().collect();
    let Some(a) = ns.first() else { return 0 };
    let Some(b) = ns.iter().find(|b| !is_zero(&cross(a, b))) else {
        return 1;
    };
    let c = cross(a, b);
    if ns.iter().any(|d| !dot(&c, d).is_zero()) {
        3
    } else {
        2
    }
}

fn collinear_extremes(p: &[Point3], dir: &Point3) -> Vec<usize> {
    let key = |i: usize| dot(dir, &p[i]);
    let lo = (0..p.len()).min_by_key(|&i| key(i)).unwrap();
    let hi = (0..p.len()).max_by_key(|&i| key(i)).unwrap();
    let mut v = vec![lo, hi];
    v.sort();
    v
}

/// Strict convex polygon of coplanar points, as indices in counter-clockwise
/// order of the projection that drops a coordinate the normal does not
/// vanish on.
fn planar_hull(p: &[Point3], normal: &Point3) -> Vec<usize> {
    let drop = (0..3).find(|&k| !normal[k].is_zero()).unwrap();
    let (x, y) = match drop {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let mut idx: Vec<usize> = (0..p.len()).collect();
    idx.sort_by(|&a, &b| (&p[a][x], &p[a][y]).cmp(&(&p[b][x], &p[b][y])));
    let turn = |o: usize, a: usize, b: usize| {
        (&p[a][x] - &p[o][x]) * (&p[b][y] - &p[o][y])
            - (&p[a][y] - &p[o][y]) * (&p[b][x] - &p[o][x])
    };
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2
            && !turn(lower[lower.len() - 2], lower[lower.len() - 1], i).is_positive()
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2
            && !turn(upper[upper.len() - 2], upper[upper.len() - 1], i).is_positive()
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Triangulated boundary with outward orientation; a point is added only
/// when some triangle sees it strictly.
fn incremental(p: &[Point3], seed: [usize; 4]) -> Vec<[usize; 3]> {
    let [a, b, c, d] = seed;
    let mut faces: Vec<[usize; 3]> = Vec::new();
    for (t, opp) in [
        ([a, b, c], d),
        ([a, b, d], c),
        ([a, c, d], b),
        ([b, c, d], a),
    ] {
        if orient(&p[t[0]], &p[t[1]], &p[t[2]], &p[opp]).is_positive() {
            faces.push([t[0], t[2], t[1]]);
        } else {
            faces.push(t);
        }
    }
    for (i, q) in p.iter().enumerate() {
        if seed.contains(&i) {
            continue;
        }
        let visible: Vec<bool> = faces
            .iter()
            .map(|f| orient(&p[f[0]], &p[f[1]], &p[f[2]], q).is_positive())
            .collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut vis_edges = HashSet::new();
        for (f, _) in faces.iter().zip(&visible).filter(|(_, &v)| v) {
            for k in 0..3 {
                vis_edges.insert((f[k], f[(k + 1) % 3]));
            }
        }
        let mut next = Vec::with_capacity(faces.len() + 4);
        for (f, &v) in faces.iter().zip(&visible) {
            if !v {
                next.push(*f);
            }
        }
        for &(u, w) in &vis_edges {
            if !vis_edges.contains(&(w, u)) {
                next.push([u, w, i]);
            }
        }
        faces = next;
    }
    faces
}

pub fn hull3_vertices(points: &[Point3]) -> Vec<Point3> {
    Hull3::new(points).vertex_points()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub fn pt(x: i64, y: i64, z: i64) -> Point3 {
        [int(x), int(y), int(z)]
    }

    pub fn random_points(rng: &mut ChaCha8Rng, count: usize, r: i64) -> Vec<Point3> {
        let mut out = Vec::new();
        while out.len() < count {
            let q = pt(
                rng.random_range(-r..=r),
                rng.random_range(-r..=r),
                rng.random_range(-r..=r),
            );
            if q.iter().map(|x| x * x).fold(int(0), |a, b| a + b) <= int(r * r) {
                out.push(q);
            }
        }
        out
    }

    /// Barycentric coordinates of `q` in some simplex spanned by the hull
    /// vertices, all non-negative.
    pub fn in_vertex_hull(h: &Hull3, q: &Point3) -> bool {
        let v: Vec<&Point3> = h.vertices.iter().map(|&i| &h.points[i]).collect();
        let k = v.len();
        match h.dim {
            0 => v[0] == q,
            1 => {
                let d = sub(v[1], v[0]);
                let t = dot(&sub(q, v[0]), &d) / dot(&d, &d);
                is_zero(&cross(&d, &sub(q, v[0]))) && t >= int(0) && t <= int(1)
            }
            2 => (0..k).any(|a| {
                (a + 1..k).any(|b| {
                    (b + 1..k).any(|c| {
                        let n = cross(&sub(v[b], v[a]), &sub(v[c], v[a]));
                        if is_zero(&n) || !dot(&n, &sub(q, v[a])).is_zero() {
                            return false;
                        }
                        let s1 = dot(&cross(&sub(v[b], v[a]), &sub(q, v[a])), &n);
                        let s2 = dot(&cross(&sub(v[c], v[b]), &sub(q, v[b])), &n);
                        let s3 = dot(&cross(&sub(v[a], v[c]), &sub(q, v[c])), &n);
                        !s1.is_negative() && !s2.is_negative() && !s3.is_negative()
                    })
                })
            }),
            _ => (0..k).any(|a| {
                (a + 1..k).any(|b| {
                    (b + 1..k).any(|c| {
                        (c + 1..k).any(|d| {
                            let vol = orient(v[a], v[b], v[c], v[d]);
                            if vol.is_zero() {
                                return false;
                            }
                            let parts = [
                                orient(q, v[b], v[c], v[d]),
                                orient(v[a], q, v[c], v[d]),
                                orient(v[a], v[b], q, v[d]),
                                orient(v[a], v[b], v[c], q),
                            ];
                            parts.iter().all(|x| !(x / &vol).is_negative())
                        })
                    })
                })
            }),
        }
    }

    fn certify(h: &Hull3) {
        for &v in &h.vertices {
            assert!(h.exposing_direction(v).is_some(), "vertex {v} not exposed");
        }
        for (i, q) in h.points.iter().enumerate() {
            if !h.vertices.contains(&i) {
                assert!(in_vertex_hull(h, q), "point {i} outside the vertex hull");
            }
        }
        if let Some((f0, f1, f2)) = h.face_counts() {
            assert_eq!(f0 as i64 - f1 as i64 + f2 as i64, 2);
            assert!(3 * f0 <= 2 * f1 && 3 * f2 <= 2 * f1);
        }
    }

    #[test]
    fn simplex_and_square() {
        let s = [pt(0, 0, 0), pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1)];
        assert_eq!(hull3_vertices(&s).len(), 4);
        let h = Hull3::new(&s);
        assert_eq!(h.face_counts(), Some((4, 6, 4)));
        let sq = [
            pt(0, 0, 0),
            pt(2, 0, 0),
            pt(0, 2, 0),
            pt(2, 2, 0),
            pt(1, 1, 0),
        ];
        let h = Hull3::new(&sq);
        assert_eq!(h.dim, 2);
        assert_eq!(
            h.vertex_points(),
            vec![pt(0, 0, 0), pt(0, 2, 0), pt(2, 0, 0), pt(2, 2, 0)]
        );
        certify(&h);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(
            hull3_vertices(&[pt(1, 1, 1), pt(1, 1, 1)]),
            vec![pt(1, 1, 1)]
        );
        let line = [pt(0, 0, 0), pt(3, 3, 3), pt(1, 1, 1), pt(2, 2, 2)];
        assert_eq!(hull3_vertices(&line), vec![pt(0, 0, 0), pt(3, 3, 3)]);
        certify(&Hull3::new(&line));
        // cube with face centres and edge midpoints
        let mut cube = Vec::new();
        for x in 0..=2 {
            for y in 0..=2 {
                for z in 0..=2 {
                    cube.push(pt(x, y, z));
                }
            }
        }
        let h = Hull3::new(&cube);
        assert_eq!(h.vertices.len(), 8);
        assert_eq!(h.face_counts(), Some((8, 12, 6)));
        certify(&h);
        // a slanted plane
        let plane: Vec<Point3> = (0..5)
            .flat_map(|a| (0..5).map(move |b| [int(a), int(b), int(a + 2 * b)]))
            .collect();
        let h = Hull3::new(&plane);
        assert_eq!(h.dim, 2);
        assert_eq!(h.vertices.len(), 4);
        certify(&h);
    }

    #[test]
    fn random_balls_are_certified() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let pts = random_points(&mut rng, 30, 12);
            let h = Hull3::new(&pts);
            certify(&h);
        }
    }

    #[test]
    fn invariant_under_duplicates_and_combinations() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let pts = random_points(&mut rng, 15, 9);
            let base = hull3_vertices(&pts);
            let mut more = pts.clone();
            more.extend(pts.iter().take(5).cloned());
            let a = &pts[rng.random_range(0..pts.len())];
            let b = &pts[rng.random_range(0..pts.len())];
            let t = frac(rng.random_range(0..=7), 7);
            more.push(add(&scale(a, &t), &scale(b, &(int(1) - &t))));
            assert_eq!(hull3_vertices(&more), base);
        }
    }
}
