//! Exact mirror and rotational symmetry of a knot.
//!
//! A [`SymmetrySpec`] names mirror pairs, on-axis nodes and rotation orbits
//! (1-based). [`SymmetryGroup`] turns it into the group of node permutations
//! with their linear maps: the mirror is `x -> -x` and reverses the direction
//! of travel along the path, the rotation is through `2π/k` about the origin
//! (counterclockwise in the raw coordinates) and keeps it. The group acts on
//! each node and its forward handle; under a reversing element a node's
//! forward handle maps onto the image node's backward handle.
//!
//! Symmetric knots are parameterized by one representative node per orbit,
//! restricted to the subspace fixed by the representative's stabilizer.

use std::collections::VecDeque;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knot::MinObj;
use crate::point::Point2;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SymmetrySpec {
    /// Pairs of nodes that are mirror images across the vertical axis.
    pub mver: Vec<[usize; 2]>,
    /// Nodes on the mirror axis.
    pub xver: Vec<usize>,
    /// Orbits of the rotation; each lists nodes in the order the rotation visits them.
    pub mrot: Vec<Vec<usize>>,
    /// Order of the rotation; 0 means infer it from the orbits.
    pub rotation_order: usize,
}

impl SymmetrySpec {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("symmetry spec: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec serializes")
    }

    pub fn is_trivial(&self) -> bool {
        self.mver.is_empty() && self.xver.is_empty() && self.mrot.is_empty()
    }

    pub fn has_mirror(&self) -> bool {
        !self.mver.is_empty() || !self.xver.is_empty()
    }
}

/// 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };
    pub const MIRROR_X: Mat2 = Mat2 {
        a: -1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    pub fn rotation(angle: f64) -> Mat2 {
        let (s, c) = angle.sin_cos();
        Mat2 {
            a: c,
            b: -s,
            c: s,
            d: c,
        }
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        Point2::new(self.a * p.x + self.b * p.y, self.c * p.x + self.d * p.y)
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Whether every entry is 0 or ±1, so applying it involves no rounding.
    pub fn is_exact(&self) -> bool {
        [self.a, self.b, self.c, self.d]
            .iter()
            .all(|v| *v == 0.0 || v.abs() == 1.0)
    }

    fn max_diff(&self, o: &Mat2) -> f64 {
        [self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d]
            .iter()
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// One group element: node `i` maps to node `perm[i]` (0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub perm: Vec<usize>,
    pub matrix: Mat2,
    /// Whether the element reverses the direction of travel.
    pub reversing: bool,
}

impl Element {
    fn identity(n: usize) -> Element {
        Element {
            perm: (0..n).collect(),
            matrix: Mat2::IDENTITY,
            reversing: false,
        }
    }

    /// `self ∘ other`: apply `other` first.
    fn compose(&self, other: &Element) -> Element {
        Element {
            perm: other.perm.iter().map(|&j| self.perm[j]).collect(),
            matrix: self.matrix.mul(&other.matrix),
            reversing: self.reversing != other.reversing,
        }
    }

    /// Image of node `i`'s node and forward handle, as the image node's node and forward handle.
    pub fn apply(&self, node: Point2, handle: Point2) -> (Point2, Point2) {
        let m = &self.matrix;
        let h = if self.reversing {
            m.apply(node * 2.0 - handle)
        } else {
            m.apply(handle)
        };
        (m.apply(node), h)
    }

    /// The element as a 4×4 matrix on `(node.x, node.y, handle.x, handle.y)`.
    fn as_matrix(&self) -> [[f64; 4]; 4] {
        let m = &self.matrix;
        let (s, k) = if self.reversing {
            (-1.0, 2.0)
        } else {
            (1.0, 0.0)
        };
        [
            [m.a, m.b, 0.0, 0.0],
            [m.c, m.d, 0.0, 0.0],
            [k * m.a, k * m.b, s * m.a, s * m.b],
            [k * m.c, k * m.d, s * m.c, s * m.d],
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Orbit {
    rep: usize,
    /// Other members with the element that carries the representative onto each.
    members: Vec<(usize, usize)>,
    /// Elements other than the identity that fix the representative.
    stabilizer: Vec<usize>,
    /// Orthonormal basis of the representative's fixed subspace in
    /// `(node.x, node.y, handle.x, handle.y)`.
    basis: Vec<[f64; 4]>,
}

/// Free parameters of a symmetric knot.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedVec {
    pub values: Vec<f64>,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryGroup {
    n: usize,
    elements: Vec<Element>,
    orbits: Vec<Orbit>,
}

fn check_index(i: usize, n: usize, what: &str) -> Result<usize> {
    if i == 0 || i > n {
        Err(Error::InconsistentSpec(format!(
            "{what} names node {i}, but the knot has nodes 1..{n}"
        )))
    } else {
        Ok(i - 1)
    }
}

impl SymmetryGroup {
    pub fn new(spec: &SymmetrySpec, n: usize) -> Result<Self> {
        let mut generators = Vec::new();
        if let Some(g) = mirror_generator(spec, n)? {
            generators.push(g);
        }
        if let Some(g) = rotation_generator(spec, n)? {
            generators.push(g);
        }
        let elements = close_group(&generators, n)?;
        let orbits = build_orbits(&elements, n);
        Ok(SymmetryGroup {
            n,
            elements,
            orbits,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// Number of free parameters of a symmetric knot.
    pub fn dimension(&self) -> usize {
        self.orbits.iter().map(|o| o.basis.len()).sum()
    }

    /// Orbits of nodes as 1-based labels, representative first.
    pub fn node_orbits(&self) -> Vec<Vec<usize>> {
        self.orbits
            .iter()
            .map(|o| {
                std::iter::once(o.rep)
                    .chain(o.members.iter().map(|m| m.0))
                    .map(|i| i + 1)
                    .collect()
            })
            .collect()
    }

    fn check_len(&self, m: &MinObj) -> Result<()> {
        if m.len() != self.n {
            return Err(Error::InconsistentSpec(format!(
                "group built for {} nodes applied to a knot with {}",
                self.n,
                m.len()
            )));
        }
        Ok(())
    }

    /// Average of the knot's images under every group element.
    fn average(&self, m: &MinObj) -> Vec<(Point2, Point2)> {
        let inv_order = 1.0 / self.elements.len() as f64;
        let mut acc = vec![(Point2::ZERO, Point2::ZERO); self.n];
        for e in &self.elements {
            for i in 0..self.n {
                let (nd, hd) = e.apply(m.nodes()[i], m.handles()[i]);
                let slot = &mut acc[e.perm[i]];
                slot.0 += nd;
                slot.1 += hd;
            }
        }
        acc.into_iter()
            .map(|(a, b)| (a * inv_order, b * inv_order))
            .collect()
    }

    /// Nearest symmetric knot: the group average, then every orbit rebuilt from its representative.
    pub fn symmetrize(&self, m: &MinObj) -> Result<MinObj> {
        self.expand(&self.reduce(m)?)
    }

    /// Coordinates of the symmetrized knot in the fundamental domain.
    pub fn reduce(&self, m: &MinObj) -> Result<ReducedVec> {
        self.check_len(m)?;
        let avg = self.average(m);
        let mut values = Vec::with_capacity(self.dimension());
        for o in &self.orbits {
            let (nd, hd) = avg[o.rep];
            let q = [nd.x, nd.y, hd.x, hd.y];
            for b in &o.basis {
                values.push(dot4(b, &q));
            }
        }
        Ok(ReducedVec { values, n: self.n })
    }

    /// The symmetric knot with the given free parameters.
    pub fn expand(&self, r: &ReducedVec) -> Result<MinObj> {
        self.expand_slice(&r.values)
    }

    pub fn expand_slice(&self, values: &[f64]) -> Result<MinObj> {
        if values.len() != self.dimension() {
            return Err(Error::BadLength { len: values.len() });
        }
        let mut nodes = vec![Point2::ZERO; self.n];
        let mut handles = vec![Point2::ZERO; self.n];
        let mut k = 0;
        for o in &self.orbits {
            let mut q = [0.0; 4];
            for b in &o.basis {
                for (qi, bi) in q.iter_mut().zip(b) {
                    *qi += values[k] * bi;
                }
                k += 1;
            }
            let nd = Point2::new(q[0], q[1]);
            let hd = Point2::new(q[2], q[3]);
            nodes[o.rep] = nd;
            handles[o.rep] = hd;
            for &(j, e) in &o.members {
                let (nj, hj) = self.elements[e].apply(nd, hd);
                nodes[j] = nj;
                handles[j] = hj;
            }
        }
        MinObj::new(nodes, handles)
    }

    /// Largest distance between a node or handle and the position the
    /// symmetry requires for it; zero exactly for the output of [`Self::expand`].
    pub fn symmetry_error(&self, m: &MinObj) -> Result<f64> {
        self.check_len(m)?;
        let mut err: f64 = 0.0;
        for o in &self.orbits {
            let (nd, hd) = (m.nodes()[o.rep], m.handles()[o.rep]);
            for &e in &o.stabilizer {
                let (ni, hi) = self.elements[e].apply(nd, hd);
                err = err.max(ni.distance(nd)).max(hi.distance(hd));
            }
            for &(j, e) in &o.members {
                let (nj, hj) = self.elements[e].apply(nd, hd);
                err = err
                    .max(nj.distance(m.nodes()[j]))
                    .max(hj.distance(m.handles()[j]));
            }
        }
        Ok(err)
    }

    /// Matrix of the symmetrizing projection on the flat knot vector layout.
    pub fn projection_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.n;
        let mut cols = Vec::with_capacity(4 * n);
        for k in 0..4 * n {
            let mut v = vec![0.0; 4 * n];
            v[k] = 1.0;
            let m = MinObj::from_slice(&v).expect("4n values");
            let s = self.symmetrize(&m).expect("matching size");
            cols.push(s.to_knotvec().into_values());
        }
        (0..4 * n)
            .map(|r| cols.iter().map(|c| c[r]).collect())
            .collect()
    }
}

fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

/// The reflection `i -> c - i (mod n)` implied by the mirror pairs and axis nodes.
fn mirror_generator(spec: &SymmetrySpec, n: usize) -> Result<Option<Element>> {
    if !spec.has_mirror() {
        return Ok(None);
    }
    let mut seen = vec![false; n];
    let mut sums: Vec<(usize, String)> = Vec::new();
    for &[a, b] in &spec.mver {
        let ia = check_index(a, n, "mver")?;
        let ib = check_index(b, n, "mver")?;
        if ia == ib {
            return Err(Error::InconsistentSpec(format!(
                "mver pair ({a}, {b}) pairs a node with itself; list it in xver"
            )));
        }
        for (i, label) in [(ia, a), (ib, b)] {
            if seen[i] {
                return Err(Error::InconsistentSpec(format!(
                    "node {label} appears in more than one mver pair"
                )));
            }
            seen[i] = true;
        }
        sums.push(((ia + ib) % n, format!("pair ({a}, {b})")));
    }
    for &x in &spec.xver {
        let ix = check_index(x, n, "xver")?;
        if seen[ix] {
            return Err(Error::InconsistentSpec(format!(
                "node {x} is both on the axis and in an mver pair"
            )));
        }
        sums.push(((2 * ix) % n, format!("axis node {x}")));
    }
    let (c, first) = &sums[0];
    if let Some((_, other)) = sums.iter().find(|(s, _)| s != c) {
        return Err(Error::InconsistentSpec(format!(
            "{first} and {other} cannot both hold under one reflection of the node cycle"
        )));
    }
    let perm = (0..n).map(|i| (c + n - i) % n).collect();
    Ok(Some(Element {
        perm,
        matrix: Mat2::MIRROR_X,
        reversing: true,
    }))
}

/// The cyclic shift `i -> i + s (mod n)` implied by the rotation orbits.
fn rotation_generator(spec: &SymmetrySpec, n: usize) -> Result<Option<Element>> {
    if spec.mrot.is_empty() {
        if spec.rotation_order > 1 {
            return Err(Error::InconsistentSpec(
                "rotation_order given without mrot orbits".into(),
            ));
        }
        return Ok(None);
    }
    let k = spec.mrot[0].len();
    if k < 2 {
        return Err(Error::InconsistentSpec(
            "rotation orbits need at least two nodes".into(),
        ));
    }
    if spec.rotation_order != 0 && spec.rotation_order != k {
        return Err(Error::InconsistentSpec(format!(
            "rotation_order {} but orbits have {k} nodes",
            spec.rotation_order
        )));
    }
    let mut seen = vec![false; n];
    let mut shift = None;
    for orbit in &spec.mrot {
        if orbit.len() != k {
            return Err(Error::InconsistentSpec(format!(
                "rotation orbits have different lengths ({k} and {})",
                orbit.len()
            )));
        }
        let idx = orbit
            .iter()
            .map(|&i| check_index(i, n, "mrot"))
            .collect::<Result<Vec<_>>>()?;
        for (&i, &label) in idx.iter().zip(orbit) {
            if seen[i] {
                return Err(Error::InconsistentSpec(format!(
                    "node {label} appears in more than one rotation orbit"
                )));
            }
            seen[i] = true;
        }
        for j in 0..k {
            let s = (idx[(j + 1) % k] + n - idx[j]) % n;
            match shift {
                None => shift = Some(s),
                Some(s0) if s0 != s => {
                    return Err(Error::InconsistentSpec(format!(
                        "orbit {orbit:?} steps from node {} to node {}, which is not the same shift along the path as the other orbit steps",
                        orbit[j],
                        orbit[(j + 1) % k]
                    )))
                }
                _ => {}
            }
        }
    }
    let s = shift.expect("non-empty orbit");
    let order = n / gcd(n, s);
    if order != k || s == 0 {
        return Err(Error::InconsistentSpec(format!(
            "a shift of {s} nodes along a {n}-node path has order {order}, not {k}"
        )));
    }
    let perm = (0..n).map(|i| (i + s) % n).collect();
    let matrix = Mat2::rotation(std::f64::consts::TAU / k as f64);
    Ok(Some(Element {
        perm,
        matrix,
        reversing: false,
    }))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn close_group(generators: &[Element], n: usize) -> Result<Vec<Element>> {
    let mut elements = vec![Element::identity(n)];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in generators {
            let h = g.compose(&elements[i]);
            match elements.iter().find(|e| e.perm == h.perm) {
                Some(e) => {
                    if e.reversing != h.reversing || e.matrix.max_diff(&h.matrix) > 1e-9 {
                        return Err(Error::InconsistentSpec(
                            "the mirror and rotation constraints send a node to two different places".into(),
                        ));
                    }
                }
                None => {
                    if elements.len() >= 2 * n {
                        return Err(Error::InconsistentSpec(
                            "symmetry group is larger than the knot allows".into(),
                        ));
                    }
                    elements.push(h);
                    queue.push_back(elements.len() - 1);
                }
            }
        }
    }
    Ok(elements)
}

fn build_orbits(elements: &[Element], n: usize) -> Vec<Orbit> {
    let mut assigned = vec![false; n];
    let mut orbits = Vec::new();
    for start in 0..n {
        if assigned[start] {
            continue;
        }
        let mut nodes: Vec<usize> = elements.iter().map(|e| e.perm[start]).collect();
        nodes.sort_unstable();
        nodes.dedup();
        let stabilizer_of = |r: usize| -> Vec<usize> {
            (1..elements.len())
                .filter(|&ei| elements[ei].perm[r] == r)
                .collect()
        };
        // a representative fixed only by exactly representable matrices keeps
        // the symmetry constraints free of rounding
        let rep = nodes
            .iter()
            .copied()
            .find(|&r| {
                stabilizer_of(r)
                    .iter()
                    .all(|&ei| elements[ei].matrix.is_exact())
            })
            .unwrap_or(nodes[0]);
        for &j in &nodes {
            assigned[j] = true;
        }
        let stabilizer = stabilizer_of(rep);
        let members = nodes
            .iter()
            .filter(|&&j| j != rep)
            .map(|&j| {
                (
                    j,
                    (1..elements.len())
                        .find(|&ei| elements[ei].perm[rep] == j)
                        .expect("orbit member"),
                )
            })
            .collect();
        let basis = fixed_basis(elements, &stabilizer);
        orbits.push(Orbit {
            rep,
            members,
            stabilizer,
            basis,
        });
    }
    orbits
}

/// Orthonormal basis of the subspace fixed by the stabilizer, by Gram–Schmidt
/// on the columns of the averaging projection.
fn fixed_basis(elements: &[Element], stabilizer: &[usize]) -> Vec<[f64; 4]> {
    let mut p = [[0.0; 4]; 4];
    for (r, row) in p.iter_mut().enumerate() {
        row[r] = 1.0;
    }
    for &e in stabilizer {
        let a = elements[e].as_matrix();
        for r in 0..4 {
            for c in 0..4 {
                p[r][c] += a[r][c];
            }
        }
    }
    let w = 1.0 / (stabilizer.len() + 1) as f64;
    let mut basis: Vec<[f64; 4]> = Vec::new();
    for c in 0..4 {
        let mut v = p.map(|row| row[c] * w);
        for b in &basis {
            let d = dot4(b, &v);
            for i in 0..4 {
                v[i] -= d * b[i];
            }
        }
        let norm = dot4(&v, &v).sqrt();
        if norm > 1e-9 {
            basis.push(v.map(|x| x / norm));
        }
    }
    basis
}

/// Translation bringing the node centroid to the origin.
pub fn center(m: &MinObj) -> (MinObj, Point2) {
    let c = m.node_centroid();
    (m.map(|p| p - c), c)
}

pub fn symmetrize(m: &MinObj, spec: &SymmetrySpec) -> Result<MinObj> {
    SymmetryGroup::new(spec, m.len())?.symmetrize(m)
}

pub fn reduce(m: &MinObj, spec: &SymmetrySpec) -> Result<ReducedVec> {
    SymmetryGroup::new(spec, m.len())?.reduce(m)
}

pub fn expand(r: &ReducedVec, spec: &SymmetrySpec) -> Result<MinObj> {
    SymmetryGroup::new(spec, r.n)?.expand(r)
}

pub fn symmetry_error(m: &MinObj, spec: &SymmetrySpec) -> Result<f64> {
    SymmetryGroup::new(spec, m.len())?.symmetry_error(m)
}
