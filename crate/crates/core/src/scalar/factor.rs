//! Factorisation of small integer polynomials by Kronecker's method.
//!
//! Only used for the optional irreducibility check and for extracting the
//! factor of a characteristic polynomial that vanishes at a given root, so
//! the degrees involved are small.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Poly;

/// Candidate evaluation points searched for small values.
const SEARCH: i64 = 24;
/// Give up on a value whose divisor set is larger than this.
const MAX_DIVISORS: usize = 4096;

/// Splits a nonzero polynomial into irreducible factors over Q (each
/// returned monic, with multiplicity), or `None` if the search exceeded
/// the internal limits.
pub fn factor(p: &Poly) -> Option<Vec<Poly>> {
    let mut out = Vec::new();
    let mut work = vec![p.monic()];
    while let Some(q) = work.pop() {
        match q.degree() {
            None | Some(0) => continue,
            Some(1) => out.push(q),
            Some(_) => match find_factor(&q)? {
                Some(f) => {
                    let (rest, _) = q.div_rem(&f);
                    work.push(f.monic());
                    work.push(rest.monic());
                }
                None => out.push(q),
            },
        }
    }
    out.sort_by_key(|f| f.degree());
    Some(out)
}

/// `Some(true)` iff `p` is irreducible over Q; `None` when undecided.
pub fn is_irreducible(p: &Poly) -> Option<bool> {
    match p.degree() {
        None | Some(0) => Some(false),
        Some(1) => Some(true),
        Some(_) => find_factor(&p.monic()).map(|f| f.is_none()),
    }
}

/// A nontrivial factor of `p` (degree ≥ 2) if one exists.
fn find_factor(p: &Poly) -> Option<Option<Poly>> {
    let ints = p.primitive_integer();
    let deg = ints.len() - 1;
    if ints[0].is_zero() {
        return Some(Some(Poly::x()));
    }
    let zp = Poly::from_bigints(&ints);
    for k in 1..=deg / 2 {
        // k+1 points with few divisors
        let mut pts: Vec<(usize, i64, BigInt)> = Vec::new();
        for x in -SEARCH..=SEARCH {
            let v = eval_int(&ints, x);
            if v.is_zero() {
                // rational root x
                return Some(Some(Poly::from_ints([-x, 1])));
            }
            let ndiv = count_divisors(&v)?;
            pts.push((ndiv, x, v));
        }
        pts.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.abs().cmp(&b.1.abs())));
        pts.truncate(k + 1);
        let xs: Vec<i64> = pts.iter().map(|p| p.1).collect();
        let divs: Vec<Vec<BigInt>> = pts
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let pos = divisors(&p.2);
                if i == 0 {
                    pos
                } else {
                    pos.iter().flat_map(|d| [d.clone(), -d.clone()]).collect()
                }
            })
            .collect();
        let mut idx = vec![0usize; k + 1];
        loop {
            let ys: Vec<BigInt> = idx.iter().enumerate().map(|(i, &j)| divs[i][j].clone()).collect();
            if let Some(cand) = interpolate(&xs, &ys) {
                if cand.degree() == Some(k) && cand.coeffs().iter().all(|c| c.is_integer()) {
                    let (_, r) = zp.div_rem(&cand);
                    if r.is_zero() {
                        return Some(Some(cand.monic()));
                    }
                }
            }
            // odometer
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < divs[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == idx.len() {
                break;
            }
        }
    }
    Some(None)
}

fn eval_int(coeffs: &[BigInt], x: i64) -> BigInt {
    let x = BigInt::from(x);
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
}

fn count_divisors(v: &BigInt) -> Option<usize> {
    let n = v.abs().to_u64()?;
    let mut count = 0;
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            count += if d * d == n { 1 } else { 2 };
        }
        d += 1;
        if count > MAX_DIVISORS {
            return None;
        }
    }
    Some(count)
}

fn divisors(v: &BigInt) -> Vec<BigInt> {
    let n = v.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            out.push(d.clone());
            let other = &n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

/// Lagrange interpolation through `(xs[i], ys[i])`.
fn interpolate(xs: &[i64], ys: &[BigInt]) -> Option<Poly> {
    let mut acc = Poly::zero();
    for (i, (&xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut basis = Poly::one();
        let mut denom = BigRational::one();
        for (j, &xj) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = basis.mul(&Poly::from_ints([-xj, 1]));
            denom *= BigRational::from_integer(BigInt::from(xi - xj));
        }
        let scale = BigRational::from_integer(yi.clone()) / denom;
        acc = acc.add(&basis.scale(&scale));
    }
    Some(acc)
}
