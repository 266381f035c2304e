use coxsurf_core::negative::{minus_one_classes, CurveClass};
use coxsurf_core::num::{rat, rat_int};
use coxsurf_core::surface::BlowupSpec;
use coxsurf_core::{zariski_decompose, DivisorClass, IntersectionLattice, Rat, ZariskiDecomposition};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn plane(r: usize) -> IntersectionLattice {
    BlowupSpec::plane(r).build_lattice().unwrap().0
}

fn curves(l: &IntersectionLattice) -> Vec<CurveClass> {
    minus_one_classes(l, 4).into_iter().map(|c| CurveClass::new(l, c, true).unwrap()).collect()
}

fn det(mut a: Vec<Vec<Rat>>) -> Rat {
    let n = a.len();
    let mut out = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Rat::zero() };
        if p != c {
            a.swap(p, c);
            out = -out;
        }
        out *= a[c][c].clone();
        for i in c + 1..n {
            let f = a[i][c].clone() / a[c][c].clone();
            for j in c..n {
                let v = a[c][j].clone() * f.clone();
                a[i][j] = a[i][j].clone() - v;
            }
        }
    }
    out
}

fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Vec<Rat> {
    // Cramer's rule; the systems here have at most six unknowns.
    let d = det(a.to_vec());
    (0..b.len())
        .map(|k| {
            let m: Vec<Vec<Rat>> =
                a.iter().zip(b).map(|(row, bi)| row.iter().enumerate().map(|(j, v)| if j == k { bi.clone() } else { v.clone() }).collect()).collect();
            det(m) / d.clone()
        })
        .collect()
}

/// Every subset `S` of the candidates with negative definite intersection
/// matrix for which `D - N` with `N` supported on `S` with positive
/// coefficients is orthogonal to `S` and non-negative on every candidate.
fn subset_oracle(l: &IntersectionLattice, d: &DivisorClass, cands: &[CurveClass]) -> Vec<(DivisorClass, Vec<(DivisorClass, Rat)>)> {
    let m = cands.len();
    let pairs: Vec<Vec<Rat>> = cands.iter().map(|a| cands.iter().map(|b| l.pair(&a.class, &b.class)).collect()).collect();
    let dc: Vec<Rat> = cands.iter().map(|c| l.pair(d, &c.class)).collect();
    let max = l.rank() - 1;
    let mut found = Vec::new();
    let mut idx: Vec<usize> = Vec::new();
    fn rec(
        start: usize,
        m: usize,
        max: usize,
        idx: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        visit(idx);
        if idx.len() == max {
            return;
        }
        for i in start..m {
            idx.push(i);
            rec(i + 1, m, max, idx, visit);
            idx.pop();
        }
    }
    let mut visit = |s: &[usize]| {
        let g: Vec<Vec<Rat>> = s.iter().map(|&i| s.iter().map(|&j| pairs[i][j].clone()).collect()).collect();
        for k in 1..=s.len() {
            let minor: Vec<Vec<Rat>> = g[..k].iter().map(|r| r[..k].to_vec()).collect();
            let sign_ok = if k % 2 == 0 { det(minor).is_positive() } else { det(minor).is_negative() };
            if !sign_ok {
                return;
            }
        }
        let rhs: Vec<Rat> = s.iter().map(|&i| dc[i].clone()).collect();
        let x = if s.is_empty() { Vec::new() } else { solve(&g, &rhs) };
        if x.iter().any(|v| !v.is_positive()) {
            return;
        }
        let nef_on_cands = (0..m).all(|c| {
            let pc = dc[c].clone() - s.iter().zip(&x).map(|(&i, v)| pairs[i][c].clone() * v.clone()).sum::<Rat>();
            !pc.is_negative()
        });
        if nef_on_cands {
            let mut p = d.clone();
            let mut support = Vec::new();
            for (&i, v) in s.iter().zip(&x) {
                p = p - cands[i].class.scale(v);
                support.push((cands[i].class.clone(), v.clone()));
            }
            support.sort();
            found.push((p, support));
        }
    };
    rec(0, m, max, &mut idx, &mut visit);
    found
}

fn flatten(z: &ZariskiDecomposition) -> (DivisorClass, Vec<(DivisorClass, Rat)>) {
    let mut s: Vec<(DivisorClass, Rat)> = z.negative_support.iter().map(|(c, x)| (c.class.clone(), x.clone())).collect();
    s.sort();
    (z.positive.clone(), s)
}

fn effective_class() -> impl Strategy<Value = (usize, i64, Vec<(usize, i64)>)> {
    (1usize..=5).prop_flat_map(|r| (Just(r), 0i64..=4, proptest::collection::vec((0usize..16, 1i64..=4), 0..=4)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matches_unique_subset((r, h, terms) in effective_class()) {
        let l = plane(r);
        let cands = curves(&l);
        let mut d = DivisorClass::from_ints(&{
            let mut v = vec![0; r + 1];
            v[0] = h;
            v
        });
        for (i, n) in terms {
            d = d + cands[i % cands.len()].class.scale(&rat_int(n));
        }
        let z = zariski_decompose(&l, &d, &cands).unwrap();
        let oracle = subset_oracle(&l, &d, &cands);
        prop_assert_eq!(oracle.len(), 1, "oracle found {} decompositions", oracle.len());
        prop_assert_eq!(flatten(&z), oracle[0].clone());
        prop_assert!(!l.self_intersection(&z.positive).is_negative());
    }

    #[test]
    fn order_does_not_matter((r, h, terms) in effective_class(), seed in any::<u64>()) {
        let l = plane(r);
        let cands = curves(&l);
        let mut d = DivisorClass::from_ints(&{
            let mut v = vec![0; r + 1];
            v[0] = h;
            v
        });
        for (i, n) in terms {
            d = d + cands[i % cands.len()].class.scale(&rat_int(n));
        }
        let mut shuffled = cands.clone();
        let mut s = seed;
        for i in (1..shuffled.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        shuffled.extend(cands.iter().take(3).cloned());
        let a = zariski_decompose(&l, &d, &cands).unwrap();
        let b = zariski_decompose(&l, &d, &shuffled).unwrap();
        prop_assert_eq!(&a, &b);
        let again = zariski_decompose(&l, &a.positive, &cands).unwrap();
        prop_assert_eq!(again.positive, a.positive);
        prop_assert!(again.negative_support.is_empty());
    }
}

#[test]
fn line_plus_exceptional() {
    let l = plane(1);
    let d = DivisorClass::from_ints(&[1, 3]);
    let z = zariski_decompose(&l, &d, &curves(&l)).unwrap();
    assert_eq!(z.positive, DivisorClass::from_ints(&[1, 0]));
    assert_eq!(z.coefficient(&DivisorClass::from_ints(&[0, 1])), rat_int(3));
}

#[test]
fn fractional_coefficients() {
    // On F2 the section s has s^2 = -2 and (f + s).s = -1, so N = s/2.
    let l = BlowupSpec::hirzebruch(2).build_lattice().unwrap().0;
    let s = CurveClass::new(&l, DivisorClass::from_ints(&[0, 1]), true).unwrap();
    let d = DivisorClass::from_ints(&[1, 1]);
    let z = zariski_decompose(&l, &d, &[s.clone()]).unwrap();
    assert_eq!(z.coefficient(&s.class), rat(1, 2));
    assert_eq!(z.positive, DivisorClass::new(vec![rat_int(1), rat(1, 2)]));
    assert_eq!(l.self_intersection(&z.positive), rat(1, 2));
    assert_eq!(flatten(&z), subset_oracle(&l, &d, &[s])[0]);
}

#[test]
fn anticanonical_on_del_pezzo_is_nef() {
    for r in 0..=5 {
        let l = plane(r);
        let z = zariski_decompose(&l, &l.anticanonical(), &curves(&l)).unwrap();
        assert_eq!(z.positive, l.anticanonical());
        assert!(z.negative_support.is_empty());
    }
}
