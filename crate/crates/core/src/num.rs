//! Number types and small helpers shared by the rest of the crate.

use alloc::string::String;
use alloc::vec::Vec;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

#[inline]
pub fn int(n: i64) -> Int {
    Int::from(n)
}

#[inline]
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

#[inline]
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

pub fn rats(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| rat_int(x)).collect()
}

/// Exact textual form: `p` for integers, `p/q` otherwise.
pub fn fmt_rat(q: &Rat) -> String {
    use alloc::string::ToString;
    q.to_string()
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = Int::from_str(n.trim()).ok()?;
            let d = Int::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => Int::from_str(s).ok().map(Rat::from_integer),
    }
}

pub fn gcd_all<'a, I: IntoIterator<Item = &'a Int>>(it: I) -> Int {
    let mut g = Int::zero();
    for x in it {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    g
}

pub fn lcm_denominators(v: &[Rat]) -> Int {
    v.iter().fold(Int::one(), |acc, q| acc.lcm(q.denom()))
}

/// Splits a nonzero rational vector as `scale * primitive` with `scale > 0`
/// and `primitive` integral of content one.
pub fn primitive_split(v: &[Rat]) -> Option<(Rat, Vec<Int>)> {
    if v.iter().all(Zero::is_zero) {
        return None;
    }
    let l = lcm_denominators(v);
    let ints: Vec<Int> = v.iter().map(|q| (q * &l).to_integer()).collect();
    let g = gcd_all(ints.iter());
    let prim: Vec<Int> = ints.iter().map(|x| x / &g).collect();
    Some((Rat::new(g, l), prim))
}

/// Divides an integer vector by its content. The zero vector is returned as is.
pub fn primitive_int(v: &[Int]) -> Vec<Int> {
    let g = gcd_all(v.iter());
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn to_rat_vec(v: &[Int]) -> Vec<Rat> {
    v.iter().cloned().map(Rat::from_integer).collect()
}

pub fn dot_int(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat_int(a: &[Rat], b: &[Int]) -> Rat {
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn is_integral(q: &Rat) -> bool {
    q.denom().is_one()
}

pub fn abs_rat(q: &Rat) -> Rat {
    q.abs()
}

/// Converts a small integer to `i64`, panicking on overflow (used only on
/// values bounded by construction).
pub fn to_i64(x: &Int) -> i64 {
    use num_traits::ToPrimitive;
    x.to_i64().expect("integer out of i64 range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_split_clears_denominators() {
        let v = [rat(3, 2), rat(0, 1), rat(-9, 4)];
        let (s, p) = primitive_split(&v).unwrap();
        assert_eq!(s, rat(3, 4));
        assert_eq!(p, [int(2), int(0), int(-3)]);
        assert!(primitive_split(&[Rat::zero()]).is_none());
    }

    #[test]
    fn rat_text_round_trip() {
        for q in [rat(253, 84), rat(-5, 6), rat_int(7), Rat::zero()] {
            assert_eq!(parse_rat(&fmt_rat(&q)).unwrap(), q);
        }
        assert_eq!(fmt_rat(&rat(253, 84)), "253/84");
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("x").is_none());
    }
}
