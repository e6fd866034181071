use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::factor;
use super::poly::{fmt_rational, Poly};
use super::ScalarError;

/// Isolating intervals are refined to at most this many bits of width at
/// construction time; sign determination refines further on demand.
const INITIAL_PRECISION_BITS: usize = 64;

/// A real number field Q(λ), λ being the unique root of `minimal_polynomial`
/// inside the isolating interval supplied at construction.
#[derive(Debug)]
pub struct NumberField {
    minpoly: Poly,
    given_lo: BigRational,
    given_hi: BigRational,
    lo: BigRational,
    hi: BigRational,
    // λ itself when a bisection midpoint happened to be the root
    exact: Option<BigRational>,
    irreducible: Option<bool>,
    approx: f64,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.minpoly == other.minpoly
            && self.given_lo == other.given_lo
            && self.given_hi == other.given_hi
    }
}

impl Eq for NumberField {}

impl NumberField {
    /// Defines Q(λ) for λ the root of `minpoly` in `(lo, hi)`. The minimal
    /// polynomial is accepted on trust; see [`NumberField::define_checked`].
    pub fn define(minpoly: Poly, lo: BigRational, hi: BigRational) -> Result<Arc<Self>, ScalarError> {
        Self::build(minpoly, lo, hi, false)
    }

    /// Like [`NumberField::define`] but also proves the polynomial irreducible.
    pub fn define_checked(
        minpoly: Poly,
        lo: BigRational,
        hi: BigRational,
    ) -> Result<Arc<Self>, ScalarError> {
        Self::build(minpoly, lo, hi, true)
    }

    fn build(minpoly: Poly, lo: BigRational, hi: BigRational, check: bool) -> Result<Arc<Self>, ScalarError> {
        if minpoly.degree().unwrap_or(0) == 0 {
            return Err(ScalarError::ConstantPolynomial);
        }
        if !minpoly.is_monic_integer() {
            return Err(ScalarError::NotMonicInteger(minpoly.to_string()));
        }
        if lo >= hi {
            return Err(ScalarError::DegenerateInterval {
                lo: fmt_rational(&lo),
                hi: fmt_rational(&hi),
            });
        }
        let (slo, shi) = (minpoly.sign_at(&lo), minpoly.sign_at(&hi));
        if slo * shi >= 0 {
            return Err(ScalarError::NoSignChange {
                poly: minpoly.to_string(),
                lo: fmt_rational(&lo),
                hi: fmt_rational(&hi),
            });
        }
        let roots = minpoly.count_roots(&lo, &hi);
        if roots != 1 {
            return Err(ScalarError::NotIsolating {
                poly: minpoly.to_string(),
                roots,
            });
        }
        let irreducible = if check {
            match factor::is_irreducible(&minpoly) {
                Some(true) => Some(true),
                Some(false) => return Err(ScalarError::Reducible(minpoly.to_string())),
                None => None,
            }
        } else if minpoly.degree() == Some(1) {
            Some(true)
        } else {
            None
        };
        let mut field = NumberField {
            minpoly,
            given_lo: lo.clone(),
            given_hi: hi.clone(),
            lo,
            hi,
            exact: None,
            irreducible,
            approx: 0.0,
        };
        if field.minpoly.degree() == Some(1) {
            let c0 = -field.minpoly.coeff(0);
            field.exact = Some(c0);
        } else {
            let width = BigRational::new(One::one(), num_bigint::BigInt::one() << INITIAL_PRECISION_BITS);
            let (mut l, mut h) = (field.lo.clone(), field.hi.clone());
            while &h - &l > width {
                match field.bisect(&mut l, &mut h) {
                    Some(root) => {
                        field.exact = Some(root);
                        break;
                    }
                    None => continue,
                }
            }
            field.lo = l;
            field.hi = h;
        }
        field.approx = ((&field.lo + &field.hi) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN);
        Ok(Arc::new(field))
    }

    pub fn minimal_polynomial(&self) -> &Poly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap_or(0)
    }

    /// The isolating interval as supplied at construction.
    pub fn isolating_interval(&self) -> (&BigRational, &BigRational) {
        (&self.given_lo, &self.given_hi)
    }

    /// Current (refined) enclosure of λ.
    pub fn enclosure(&self) -> (&BigRational, &BigRational) {
        match &self.exact {
            Some(r) => (r, r),
            None => (&self.lo, &self.hi),
        }
    }

    /// `Some(true)` when irreducibility was proven.
    pub fn known_irreducible(&self) -> Option<bool> {
        self.irreducible
    }

    /// Halves `[lo, hi]` around λ; returns λ if the midpoint is the root.
    fn bisect(&self, lo: &mut BigRational, hi: &mut BigRational) -> Option<BigRational> {
        let mid = (&*lo + &*hi) / BigRational::from_integer(2.into());
        let smid = self.minpoly.sign_at(&mid);
        if smid == 0 {
            return Some(mid);
        }
        if smid == self.minpoly.sign_at(lo) {
            *lo = mid;
        } else {
            *hi = mid;
        }
        None
    }

    /// Reduces a polynomial in λ modulo the minimal polynomial.
    pub fn reduce(&self, p: &Poly) -> Poly {
        if p.degree().is_some_and(|d| d >= self.degree()) {
            p.rem(&self.minpoly)
        } else {
            p.clone()
        }
    }

    /// Inverse of `p(λ)` as a reduced polynomial, or `None` when `p(λ) = 0`.
    pub(crate) fn inverse(&self, p: &Poly) -> Option<Poly> {
        if self.sign_of(p) == 0 {
            return None;
        }
        // strip factors shared with p; λ stays a root of what is left
        let mut modulus = self.minpoly.clone();
        loop {
            let (g, s) = p.gcd_cofactor(&modulus);
            if g.degree() == Some(0) {
                return Some(self.reduce(&s.rem(&modulus)));
            }
            modulus = modulus.div_rem(&g).0;
        }
    }

    /// Exact sign of `p(λ)`.
    pub fn sign_of(&self, p: &Poly) -> i8 {
        if p.is_zero() {
            return 0;
        }
        if p.degree() == Some(0) {
            return if p.coeff(0).is_positive() { 1 } else { -1 };
        }
        if let Some(r) = &self.exact {
            return p.sign_at(r);
        }
        if let Some(s) = self.float_sign(p) {
            return s;
        }
        let (mut lo, mut hi) = (self.lo.clone(), self.hi.clone());
        let mut zero_excluded = self.irreducible == Some(true);
        loop {
            if let Some(s) = bound_sign(p, &lo, &hi) {
                return s;
            }
            if !zero_excluded {
                let g = p.gcd(&self.minpoly);
                if g.degree().is_some_and(|d| d > 0) && g.count_roots(&lo, &hi) > 0 {
                    return 0;
                }
                zero_excluded = true;
            }
            if let Some(root) = self.bisect(&mut lo, &mut hi) {
                return p.sign_at(&root);
            }
        }
    }

    /// Sign from a double-precision evaluation when the value clears the
    /// error bound by a wide margin.
    ///
    /// `λ` is known to within `2^-64`, so for degree `n <= 64` the error from
    /// `λ` is at most `n 2^-64 Σ|c_k|(|λ|+1)^k` and Horner rounding adds at
    /// most `2n u` times the same sum; both sit far below the `1e-9` margin.
    fn float_sign(&self, p: &Poly) -> Option<i8> {
        let x = self.approx;
        if !x.is_finite() || p.coeffs().len() > 65 {
            return None;
        }
        let r = x.abs() + 1.0;
        let (mut v, mut m) = (0.0f64, 0.0f64);
        for c in p.coeffs().iter().rev() {
            let cf = c.to_f64()?;
            if !cf.is_finite() || (cf.abs() < 1e-250 && !c.is_zero()) || cf.abs() > 1e250 {
                return None;
            }
            v = v * x + cf;
            m = m * r + cf.abs();
        }
        if !m.is_finite() || !(v.abs() > m * 1e-9) {
            return None;
        }
        Some(if v > 0.0 { 1 } else { -1 })
    }

    /// Rational enclosure `[l, h]` of `p(λ)` no wider than `width`.
    pub fn enclose(&self, p: &Poly, width: &BigRational) -> (BigRational, BigRational) {
        if let Some(r) = &self.exact {
            let v = p.eval(r);
            return (v.clone(), v);
        }
        let (mut lo, mut hi) = (self.lo.clone(), self.hi.clone());
        loop {
            let (mid, err) = centered(p, &lo, &hi);
            if &err * BigRational::from_integer(2.into()) <= *width {
                return (&mid - &err, &mid + &err);
            }
            if let Some(root) = self.bisect(&mut lo, &mut hi) {
                let v = p.eval(&root);
                return (v.clone(), v);
            }
        }
    }
}

/// Value at the midpoint and a bound on the deviation over `[lo, hi]`.
fn centered(p: &Poly, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let two = BigRational::from_integer(2.into());
    let mid = (lo + hi) / &two;
    let radius = (hi - lo) / &two;
    let bound = lo.abs().max(hi.abs());
    let v = p.eval(&mid);
    // |λ^k - m^k| <= k B^(k-1) |λ - m|
    let mut err = BigRational::zero();
    let mut bpow = BigRational::one();
    for (k, c) in p.coeffs().iter().enumerate().skip(1) {
        let kq = BigRational::from_integer(k.into());
        err += c.abs() * kq * &bpow;
        bpow *= &bound;
    }
    (v, err * radius)
}

fn bound_sign(p: &Poly, lo: &BigRational, hi: &BigRational) -> Option<i8> {
    let (v, err) = centered(p, lo, hi);
    if v.abs() > err {
        Some(if v.is_positive() { 1 } else { -1 })
    } else {
        None
    }
}
