//! Negative classes: bounded enumeration of classes with prescribed square and
//! canonical degree, dual graphs of (-2)-configurations and recognition of
//! (extended) Dynkin diagrams.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::lattice::{DivisorClass, IntersectionLattice, LatticeError};
use crate::num;

/// An integral class together with its numerical invariants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveClass {
    pub class: DivisorClass,
    pub self_int: i64,
    pub k_deg: i64,
    pub genus: i64,
    /// Set when an integral curve is known to realize the class.
    pub effective_certified: bool,
}

impl CurveClass {
    pub fn new(lattice: &IntersectionLattice, class: DivisorClass, certified: bool) -> Result<Self, LatticeError> {
        lattice.check(&class)?;
        if !class.is_integral() {
            return Err(LatticeError::NonIntegral);
        }
        let self_int = num::to_i64(&lattice.self_intersection(&class).to_integer());
        let k_deg = num::to_i64(&lattice.k_degree(&class).to_integer());
        let genus = lattice.arithmetic_genus(&class)?;
        Ok(Self { class, self_int, k_deg, genus, effective_certified: certified })
    }

    pub fn is_minus_one(&self) -> bool {
        self.self_int == -1 && self.k_deg == -1 && self.genus == 0
    }

    pub fn is_minus_two(&self) -> bool {
        self.self_int == -2 && self.k_deg == 0 && self.genus == 0
    }
}

/// Largest `|d|` of a class `d H + sum c_i E_i` on the blow-up of the plane at
/// `r < 9` points with `D^2 = self_int` and `K.D = k_deg`, or `-1` when no
/// degree is possible.
///
/// Follows from `(sum c_i)^2 <= r sum c_i^2` with `sum c_i = -3d - k` and
/// `sum c_i^2 = d^2 - self_int`, a quadratic in `d` with leading coefficient
/// `9 - r > 0`. There is no cutoff for `r >= 9`.
pub fn plane_degree_cutoff(r: usize, self_int: i64, k_deg: i64) -> Option<i64> {
    if r >= 9 {
        return None;
    }
    let r = r as i64;
    let feasible = |d: i64| (3 * d + k_deg).pow(2) <= r * (d * d - self_int) && d * d >= self_int;
    let vertex = -3 * k_deg / (9 - r);
    let span = 4 + 4 * (k_deg.abs() + self_int.abs());
    let best = ((vertex - span)..=(vertex + span))
        .filter(|&d| feasible(d))
        .map(i64::abs)
        .max()
        .unwrap_or(-1);
    Some(best)
}

fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    // Newton iteration from above.
    let mut x = n;
    let mut y = (x + 1) / 2;
    while y < x {
        x = y;
        y = (x + n / x) / 2;
    }
    x
}

/// Integer vectors `c` of length `n` with `sum c = s` and `sum c^2 = q`.
fn sum_square_solutions(n: usize, s: i64, q: i64, out: &mut Vec<Vec<i64>>) {
    fn feasible(n: i64, s: i64, q: i64) -> bool {
        q >= 0 && n * q >= s * s && (q - s).rem_euclid(2) == 0 && (n > 0 || (s == 0 && q == 0))
    }
    fn rec(i: usize, n: usize, s: i64, q: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == n {
            if s == 0 && q == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let rest = (n - i - 1) as i64;
        let m = isqrt(q);
        for x in -m..=m {
            let (s2, q2) = (s - x, q - x * x);
            if feasible(rest, s2, q2) {
                cur.push(x);
                rec(i + 1, n, s2, q2, cur, out);
                cur.pop();
            }
        }
    }
    if feasible(n as i64, s, q) {
        rec(0, n, s, q, &mut Vec::with_capacity(n), out);
    }
}

/// Integral classes of height exactly `h` with the given square and
/// canonical degree, in no particular order. Heights partition the search
/// space, so slices can be computed independently and merged.
pub fn enumerate_at_height(lattice: &IntersectionLattice, self_int: i64, k_deg: i64, h: u64) -> Vec<Vec<i64>> {
    let h = h as i64;
    let mut found = Vec::new();
    if lattice.is_plane_blowup_basis() {
        let r = lattice.rank() - 1;
        let degrees: Vec<i64> = if h == 0 { vec![0] } else { vec![h, -h] };
        for d in degrees {
            let mut tails = Vec::new();
            sum_square_solutions(r, -3 * d - k_deg, d * d - self_int, &mut tails);
            for t in tails {
                let mut v = Vec::with_capacity(r + 1);
                v.push(d);
                // Coordinates are the coefficients of E_i.
                v.extend(t);
                found.push(v);
            }
        }
    } else {
        let n = lattice.rank();
        let gram = lattice.gram();
        let k = lattice.canonical_coords();
        let mut v = vec![-h; n];
        loop {
            if v.iter().any(|x| x.abs() == h) {
                let kd: i64 = (0..n).map(|i| k[i] * (0..n).map(|j| gram[i][j] * v[j]).sum::<i64>()).sum();
                if kd == k_deg {
                    let sq: i64 = (0..n).map(|i| v[i] * (0..n).map(|j| gram[i][j] * v[j]).sum::<i64>()).sum();
                    if sq == self_int {
                        found.push(v.clone());
                    }
                }
            }
            let mut i = 0;
            loop {
                if i == n {
                    return found;
                }
                if v[i] < h {
                    v[i] += 1;
                    break;
                }
                v[i] = -h;
                i += 1;
            }
        }
    }
    found
}

/// All integral classes `D` with `D^2 = self_int`, `K.D = k_deg` and height at
/// most `bound`, in lexicographic order.
///
/// Height is `|d|` for `D = d H + sum c_i E_i` in a plane blow-up basis and the
/// largest absolute coordinate otherwise.
pub fn enumerate_classes(lattice: &IntersectionLattice, self_int: i64, k_deg: i64, bound: u64) -> Vec<DivisorClass> {
    merge_slices((0..=bound).map(|h| enumerate_at_height(lattice, self_int, k_deg, h)))
}

/// Sorted, deduplicated union of enumeration slices.
pub fn merge_slices<I: IntoIterator<Item = Vec<Vec<i64>>>>(slices: I) -> Vec<DivisorClass> {
    let set: BTreeSet<Vec<i64>> = slices.into_iter().flatten().collect();
    set.into_iter().map(|v| DivisorClass::from_ints(&v)).collect()
}

pub fn minus_one_classes(lattice: &IntersectionLattice, bound: u64) -> Vec<DivisorClass> {
    enumerate_classes(lattice, -1, -1, bound)
}

pub fn minus_two_classes(lattice: &IntersectionLattice, bound: u64) -> Vec<DivisorClass> {
    enumerate_classes(lattice, -2, 0, bound)
}

/// Dual graph of a configuration of (-2)-classes: edge weights are the
/// pairwise intersection numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberComponentGraph {
    pub nodes: Vec<CurveClass>,
    pub weights: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("node {0} is not a (-2)-class")]
    NotMinusTwo(usize),
    #[error("nodes {0} and {1} meet negatively")]
    NegativeEdge(usize, usize),
}

pub fn dual_graph(lattice: &IntersectionLattice, classes: &[CurveClass]) -> Result<FiberComponentGraph, GraphError> {
    for (i, c) in classes.iter().enumerate() {
        if !c.is_minus_two() {
            return Err(GraphError::NotMinusTwo(i));
        }
    }
    let n = classes.len();
    let mut weights = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..i {
            let w = num::to_i64(&lattice.pair(&classes[i].class, &classes[j].class).to_integer());
            if w < 0 {
                return Err(GraphError::NegativeEdge(j, i));
            }
            weights[i][j] = w;
            weights[j][i] = w;
        }
    }
    Ok(FiberComponentGraph { nodes: classes.to_vec(), weights })
}

impl FiberComponentGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Connected components as sorted node index lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        components(&self.weights)
    }

    pub fn subgraph(&self, nodes: &[usize]) -> FiberComponentGraph {
        FiberComponentGraph {
            nodes: nodes.iter().map(|&i| self.nodes[i].clone()).collect(),
            weights: nodes.iter().map(|&i| nodes.iter().map(|&j| self.weights[i][j]).collect()).collect(),
        }
    }
}

fn components(adj: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut k = 0;
        while k < comp.len() {
            let u = comp[k];
            for v in 0..n {
                if v != u && adj[u][v] != 0 && !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DynkinFamily {
    A,
    D,
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DynkinType {
    pub family: DynkinFamily,
    pub extended: bool,
    pub rank: usize,
}

impl DynkinType {
    pub const fn new(family: DynkinFamily, extended: bool, rank: usize) -> Self {
        Self { family, extended, rank }
    }

    pub fn is_valid(&self) -> bool {
        match self.family {
            DynkinFamily::A => self.rank >= 1,
            DynkinFamily::D => self.rank >= 4,
            DynkinFamily::E => (6..=8).contains(&self.rank),
        }
    }

    /// Number of nodes of the diagram.
    pub fn nodes(&self) -> usize {
        self.rank + usize::from(self.extended)
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            DynkinFamily::A => 'A',
            DynkinFamily::D => 'D',
            DynkinFamily::E => 'E',
        };
        if self.extended {
            write!(f, "{fam}~{}", self.rank)
        } else {
            write!(f, "{fam}{}", self.rank)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid Dynkin label {0:?}")]
pub struct DynkinParseError(pub alloc::string::String);

impl FromStr for DynkinType {
    type Err = DynkinParseError;

    /// Parses labels such as `A2`, `A~2`, `D~4`, `E~8`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || DynkinParseError(s.into());
        let t = s.trim();
        let mut chars = t.chars();
        let family = match chars.next().ok_or_else(err)? {
            'A' => DynkinFamily::A,
            'D' => DynkinFamily::D,
            'E' => DynkinFamily::E,
            _ => return Err(err()),
        };
        let rest = chars.as_str();
        let (extended, digits) = match rest.strip_prefix('~') {
            Some(d) => (true, d),
            None => (false, rest),
        };
        let rank: usize = digits.parse().map_err(|_| err())?;
        let ty = DynkinType { family, extended, rank };
        if ty.is_valid() {
            Ok(ty)
        } else {
            Err(err())
        }
    }
}

/// Recognizes a connected graph as a finite or extended simply-laced Dynkin
/// diagram. `Ã1` is two nodes joined by a double edge; any other multiple
/// edge is rejected.
pub fn dynkin_classify(component: &FiberComponentGraph) -> Option<DynkinType> {
    classify_adjacency(&component.weights)
}

pub fn classify_adjacency(adj: &[Vec<i64>]) -> Option<DynkinType> {
    use DynkinFamily::*;
    let n = adj.len();
    if n == 0 || components(adj).len() != 1 {
        return None;
    }
    if (0..n).any(|i| adj[i][i] != 0) {
        return None;
    }
    if n == 1 {
        return Some(DynkinType::new(A, false, 1));
    }
    if n == 2 && adj[0][1] == 2 {
        return Some(DynkinType::new(A, true, 1));
    }
    if adj.iter().flatten().any(|&w| w != 0 && w != 1) {
        return None;
    }
    let deg: Vec<usize> = adj.iter().map(|r| r.iter().filter(|&&w| w == 1).count()).collect();
    let edges = deg.iter().sum::<usize>() / 2;
    if edges == n {
        return deg.iter().all(|&d| d == 2).then(|| DynkinType::new(A, true, n - 1));
    }
    if edges != n - 1 {
        return None;
    }
    let branch: Vec<usize> = (0..n).filter(|&i| deg[i] >= 3).collect();
    match branch.as_slice() {
        [] => Some(DynkinType::new(A, false, n)),
        [b] if deg[*b] == 4 => (n == 5).then(|| DynkinType::new(D, true, 4)),
        [b] if deg[*b] == 3 => {
            let mut arms = arm_lengths(adj, *b);
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, r] => Some(DynkinType::new(D, false, r + 3)),
                [1, 2, 2] => Some(DynkinType::new(E, false, 6)),
                [1, 2, 3] => Some(DynkinType::new(E, false, 7)),
                [1, 2, 4] => Some(DynkinType::new(E, false, 8)),
                [2, 2, 2] => Some(DynkinType::new(E, true, 6)),
                [1, 3, 3] => Some(DynkinType::new(E, true, 7)),
                [1, 2, 5] => Some(DynkinType::new(E, true, 8)),
                _ => None,
            }
        }
        [b1, b2] if deg[*b1] == 3 && deg[*b2] == 3 => {
            // D~n: each branch node carries two leaves.
            let leaves_at = |b: usize| (0..n).filter(|&v| adj[b][v] == 1 && deg[v] == 1).count();
            (leaves_at(*b1) == 2 && leaves_at(*b2) == 2).then(|| DynkinType::new(D, true, n - 1))
        }
        _ => None,
    }
}

fn arm_lengths(adj: &[Vec<i64>], center: usize) -> Vec<usize> {
    let n = adj.len();
    let mut arms = Vec::new();
    for start in (0..n).filter(|&v| adj[center][v] == 1) {
        let (mut prev, mut cur, mut len) = (center, start, 1);
        loop {
            let next: Vec<usize> = (0..n).filter(|&v| v != prev && adj[cur][v] == 1).collect();
            match next.as_slice() {
                [] => break,
                [v] => {
                    prev = cur;
                    cur = *v;
                    len += 1;
                }
                _ => return vec![usize::MAX],
            }
        }
        arms.push(len);
    }
    arms
}
