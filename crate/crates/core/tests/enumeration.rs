use std::collections::{BTreeSet, VecDeque};

use coxsurf_core::negative::{
    self, classify_adjacency, enumerate_classes, minus_one_classes, minus_two_classes, plane_degree_cutoff,
    DynkinFamily, DynkinType,
};
use coxsurf_core::surface::BlowupSpec;
use coxsurf_core::{DivisorClass, IntersectionLattice};
use proptest::prelude::*;

fn plane(r: usize) -> IntersectionLattice {
    BlowupSpec::plane(r).build_lattice().unwrap().0
}

fn ints(classes: &[DivisorClass]) -> BTreeSet<Vec<i64>> {
    classes.iter().map(|c| c.to_i64s().unwrap()).collect()
}

/// Pairing and canonical degree in the basis H, E_1..E_r.
fn dot(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[0] - a[1..].iter().zip(&b[1..]).map(|(x, y)| x * y).sum::<i64>()
}

fn k_deg(a: &[i64]) -> i64 {
    -3 * a[0] - a[1..].iter().sum::<i64>()
}

/// Every vector in a box wide enough to hold all classes of degree at most
/// `bound` with the given square.
fn box_oracle(r: usize, self_int: i64, kd: i64, bound: i64) -> BTreeSet<Vec<i64>> {
    let width = bound + 1 + self_int.abs();
    let mut out = BTreeSet::new();
    let mut v = vec![-width; r];
    for d in -bound..=bound {
        v.iter_mut().for_each(|x| *x = -width);
        loop {
            let mut c = vec![d];
            c.extend(&v);
            if dot(&c, &c) == self_int && k_deg(&c) == kd {
                out.insert(c);
            }
            let mut i = 0;
            while i < r && v[i] == width {
                v[i] = -width;
                i += 1;
            }
            if i == r {
                break;
            }
            v[i] += 1;
        }
    }
    out
}

/// Orbit of `E_r` under the Weyl group generated by reflections in
/// `H - E_1 - E_2 - E_3` and `E_i - E_{i+1}`.
fn weyl_orbit(r: usize) -> BTreeSet<Vec<i64>> {
    let mut roots = Vec::new();
    if r >= 3 {
        let mut a = vec![0; r + 1];
        a[0] = 1;
        a[1..4].iter_mut().for_each(|x| *x = -1);
        roots.push(a);
    }
    for i in 1..r {
        let mut a = vec![0; r + 1];
        a[i] = 1;
        a[i + 1] = -1;
        roots.push(a);
    }
    let mut start = vec![0; r + 1];
    start[r] = 1;
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for a in &roots {
            let t = dot(&v, a);
            let w: Vec<i64> = v.iter().zip(a).map(|(x, y)| x + t * y).collect();
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    seen
}

#[test]
fn box_oracle_agrees_on_small_blowups() {
    for r in 1..=4 {
        let l = plane(r);
        for bound in 0..=4u64 {
            for (s, k) in [(-1, -1), (-2, 0), (-3, 1)] {
                let got = ints(&enumerate_classes(&l, s, k, bound));
                assert_eq!(got, box_oracle(r, s, k, bound as i64), "r={r} bound={bound} ({s}, {k})");
            }
        }
    }
}

#[test]
fn minus_one_counts_match_weyl_orbits() {
    let expected = [(1, 1), (2, 3), (3, 6), (4, 10), (5, 16), (6, 27), (7, 56), (8, 240)];
    for (r, count) in expected {
        let got = ints(&minus_one_classes(&plane(r), 7));
        assert_eq!(got.len(), count, "r={r}");
        if r >= 3 {
            assert_eq!(got, weyl_orbit(r), "r={r}");
        }
    }
}

#[test]
fn degree_cutoff_bounds_every_class() {
    for r in 1..=8 {
        let cutoff = plane_degree_cutoff(r, -1, -1).unwrap();
        let all = minus_one_classes(&plane(r), 12);
        let top = all.iter().map(|c| c.to_i64s().unwrap()[0].abs()).max().unwrap();
        assert!(top <= cutoff, "r={r}: degree {top} beyond cutoff {cutoff}");
        assert_eq!(ints(&all), ints(&minus_one_classes(&plane(r), cutoff as u64)));
    }
    assert_eq!(plane_degree_cutoff(9, -1, -1), None);
}

#[test]
fn roots_of_e8() {
    // The (-2)-classes orthogonal to K are the roots of E8 and E6.
    assert_eq!(minus_two_classes(&plane(8), 7).len(), 240);
    assert_eq!(minus_two_classes(&plane(6), 7).len(), 72);
}

#[test]
fn infinitely_many_on_nine_points() {
    let l = plane(9);
    let counts: Vec<usize> = [2u64, 4, 6, 8].iter().map(|&b| minus_one_classes(&l, b).len()).collect();
    assert!(counts.windows(2).all(|w| w[0] < w[1]), "{counts:?}");
}

#[test]
fn generic_basis_matches_box() {
    let l = BlowupSpec::hirzebruch(1).build_lattice().unwrap().0;
    let gram = l.gram().to_vec();
    let k = l.canonical_coords().to_vec();
    for bound in 0..=5i64 {
        let mut want = BTreeSet::new();
        for a in -bound..=bound {
            for b in -bound..=bound {
                let v = [a, b];
                let gv: Vec<i64> = (0..2).map(|i| gram[i][0] * v[0] + gram[i][1] * v[1]).collect();
                let sq = v[0] * gv[0] + v[1] * gv[1];
                let kd = k[0] * gv[0] + k[1] * gv[1];
                if sq == -1 && kd == -1 {
                    want.insert(v.to_vec());
                }
            }
        }
        assert_eq!(ints(&minus_one_classes(&l, bound as u64)), want);
    }
}

proptest! {
    #[test]
    fn counts_grow_with_the_bound(r in 1usize..=7, b in 0u64..=5) {
        let l = plane(r);
        let small = ints(&minus_one_classes(&l, b));
        let large = ints(&minus_one_classes(&l, b + 1));
        prop_assert!(small.is_subset(&large));
    }

    #[test]
    fn slices_partition_by_height(r in 1usize..=6, h in 0u64..=4) {
        let l = plane(r);
        for v in negative::enumerate_at_height(&l, -1, -1, h) {
            prop_assert_eq!(v[0].unsigned_abs(), h);
        }
    }
}

/// Fraction-free rank of a small integer matrix.
fn rank(m: &[Vec<i128>]) -> usize {
    let mut a = m.to_vec();
    let (rows, cols) = (a.len(), a.first().map_or(0, Vec::len));
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, p);
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let (x, y) = (a[r][c], a[i][c]);
                for j in 0..cols {
                    a[i][j] = a[i][j] * x - a[r][j] * y;
                }
                let g = a[i].iter().fold(0i128, |g, &v| gcd(g, v.abs()));
                if g > 1 {
                    a[i].iter_mut().for_each(|v| *v /= g);
                }
            }
        }
        r += 1;
    }
    r
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Determinant by cofactor expansion; fine for at most nine rows.
fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .filter(|&j| m[0][j] != 0)
        .map(|j| {
            let minor: Vec<Vec<i128>> =
                m[1..].iter().map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

fn principal(m: &[Vec<i128>], idx: &[usize]) -> Vec<Vec<i128>> {
    idx.iter().map(|&i| idx.iter().map(|&j| m[i][j]).collect()).collect()
}

enum Cartan {
    Finite(i128),
    Affine,
    Neither,
}

/// Sorts `2I - A` into positive definite, positive semidefinite with a
/// one-dimensional kernel, or neither.
fn cartan_oracle(adj: &[Vec<i64>]) -> Cartan {
    let n = adj.len();
    let c: Vec<Vec<i128>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { 2 } else { -(adj[i][j] as i128) }).collect()).collect();
    let leading: Vec<i128> = (1..=n).map(|k| det(&principal(&c, &(0..k).collect::<Vec<_>>()))).collect();
    if leading.iter().all(|&d| d > 0) {
        return Cartan::Finite(leading[n - 1]);
    }
    let psd = (1u32..1 << n).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        det(&principal(&c, &idx)) >= 0
    });
    if psd && rank(&c) == n - 1 {
        Cartan::Affine
    } else {
        Cartan::Neither
    }
}

fn finite_det(t: DynkinType) -> i128 {
    match t.family {
        DynkinFamily::A => t.rank as i128 + 1,
        DynkinFamily::D => 4,
        DynkinFamily::E => 9 - t.rank as i128,
    }
}

fn connected_graph() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=9).prop_flat_map(|n| {
        let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|i| (0..i).boxed()).collect();
        let extra = proptest::collection::vec(proptest::bool::weighted(0.08), n * n);
        (Just(n), parents, extra).prop_map(|(n, parents, extra)| {
            let mut a = vec![vec![0i64; n]; n];
            for (i, &p) in parents.iter().enumerate() {
                a[i + 1][p] = 1;
                a[p][i + 1] = 1;
            }
            for i in 0..n {
                for j in 0..i {
                    if extra[i * n + j] {
                        a[i][j] = 1;
                        a[j][i] = 1;
                    }
                }
            }
            a
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn dynkin_recognition_matches_cartan_form(adj in connected_graph()) {
        let n = adj.len();
        let got = classify_adjacency(&adj);
        match cartan_oracle(&adj) {
            Cartan::Finite(d) => {
                let t = got.expect("finite diagram not recognized");
                prop_assert!(!t.extended);
                prop_assert_eq!(t.nodes(), n);
                prop_assert_eq!(finite_det(t), d);
            }
            Cartan::Affine => {
                let t = got.expect("extended diagram not recognized");
                prop_assert!(t.extended);
                prop_assert_eq!(t.nodes(), n);
            }
            Cartan::Neither => prop_assert_eq!(got, None),
        }
    }
}

#[test]
fn named_diagrams() {
    let a1_tilde = vec![vec![0, 2], vec![2, 0]];
    assert_eq!(classify_adjacency(&a1_tilde), Some("A~1".parse().unwrap()));
    assert!(matches!(cartan_oracle(&a1_tilde), Cartan::Affine));
    let triple = vec![vec![0, 3], vec![3, 0]];
    assert_eq!(classify_adjacency(&triple), None);
    let mut cycle = vec![vec![0i64; 3]; 3];
    for i in 0..3 {
        cycle[i][(i + 1) % 3] = 1;
        cycle[(i + 1) % 3][i] = 1;
    }
    assert_eq!(classify_adjacency(&cycle), Some("A~2".parse().unwrap()));
    for label in ["A3", "D5", "E6", "E7", "E8", "D~4", "D~6", "E~6", "E~7", "E~8"] {
        let t: DynkinType = label.parse().unwrap();
        assert_eq!(t.to_string(), label);
    }
}
