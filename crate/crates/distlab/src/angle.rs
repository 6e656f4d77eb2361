//! Exact roots of unity as rational angles, and exact accumulation of
//! character sums as rational combinations of roots of unity.

use crate::scalar::{Scalar, C};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::f64::consts::TAU;
use std::fmt;
use std::sync::Mutex;

/// A root of unity `e^(2*pi*i*t)` stored as the exact fraction of a turn
/// `t = num/den`, reduced and normalized into `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalAngle {
    num: i64,
    den: i64,
}

impl RationalAngle {
    pub const ZERO: RationalAngle = RationalAngle { num: 0, den: 1 };
    pub const HALF: RationalAngle = RationalAngle { num: 1, den: 2 };

    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let r = Ratio::new(num as i128, den as i128);
        let one = Ratio::from_integer(1i128);
        let mut r = r - r.floor();
        if r >= one {
            r -= one;
        }
        RationalAngle {
            num: i64::try_from(*r.numer()).expect("angle overflow"),
            den: i64::try_from(*r.denom()).expect("angle overflow"),
        }
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// True iff the root of unity is `1` or `-1`.
    pub fn is_real_sign(&self) -> bool {
        self.den == 1 || self.den == 2
    }

    /// `+1` or `-1` when the angle is real, `None` otherwise.
    pub fn as_sign(&self) -> Option<i32> {
        match (self.num, self.den) {
            (0, 1) => Some(1),
            (1, 2) => Some(-1),
            _ => None,
        }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        let g = (self.den as i128).gcd(&(k as i128)) as i64;
        RationalAngle::new((k / g).wrapping_mul(self.num) % (self.den / g), self.den / g)
    }

    pub fn neg(&self) -> Self {
        RationalAngle::new(-self.num, self.den)
    }

    pub fn to_complex<F: Scalar>(&self) -> C<F> {
        let t = TAU * (self.num as f64) / (self.den as f64);
        C::new(F::from_f64c(t.cos()), F::from_f64c(t.sin()))
    }
}

impl std::ops::Add for RationalAngle {
    type Output = RationalAngle;
    fn add(self, rhs: RationalAngle) -> RationalAngle {
        let den = (self.den as i128).lcm(&(rhs.den as i128));
        let num = self.num as i128 * (den / self.den as i128)
            + rhs.num as i128 * (den / rhs.den as i128);
        RationalAngle::new(
            i64::try_from(num.rem_euclid(den)).expect("angle overflow"),
            i64::try_from(den).expect("angle overflow"),
        )
    }
}

impl fmt::Debug for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}turn", self.num, self.den)
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Exact finite sum `sum_k c_k * e^(2*pi*i*t_k)` with rational coefficients.
///
/// Supports exact zero tests and exact integer extraction via reduction
/// modulo the cyclotomic polynomial, so character inner products can be
/// certified without floating-point tolerance.
#[derive(Clone, Debug, Default)]
pub struct CycloSum {
    terms: BTreeMap<RationalAngle, Ratio<i128>>,
}

impl CycloSum {
    pub fn zero() -> Self {
        CycloSum::default()
    }

    pub fn add_root(&mut self, angle: RationalAngle, coeff: Ratio<i128>) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(angle).or_insert_with(Ratio::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&angle);
        }
    }

    pub fn add_unit(&mut self, angle: RationalAngle) {
        self.add_root(angle, Ratio::one());
    }

    pub fn scale(&mut self, c: Ratio<i128>) {
        if c.is_zero() {
            self.terms.clear();
            return;
        }
        for v in self.terms.values_mut() {
            *v *= c;
        }
    }

    pub fn to_complex<F: Scalar>(&self) -> C<F> {
        let mut acc = C::new(F::zero(), F::zero());
        for (a, c) in &self.terms {
            let w = (*c.numer() as f64) / (*c.denom() as f64);
            acc = acc + a.to_complex::<F>() * C::new(F::from_f64c(w), F::zero());
        }
        acc
    }

    /// Exact test against zero, by reducing the coefficient polynomial modulo
    /// the cyclotomic polynomial of the common root order.
    pub fn is_zero(&self) -> bool {
        self.reduced_coeffs().iter().all(|c| c.is_zero())
    }

    /// Exact rational value when the sum is a rational number, else `None`.
    ///
    /// Reduction modulo the cyclotomic polynomial expresses the sum on the
    /// power basis of the cyclotomic field, where rationality is exactly the
    /// vanishing of every non-constant coordinate.
    pub fn as_rational(&self) -> Option<Ratio<i128>> {
        let coeffs = self.reduced_coeffs();
        if coeffs.is_empty() {
            return Some(Ratio::zero());
        }
        if coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(coeffs[0])
        } else {
            None
        }
    }

    /// Exact integer value when the sum is a rational integer, else `None`.
    pub fn as_integer(&self) -> Option<i128> {
        let r = self.as_rational()?;
        if r.denom().is_one() {
            Some(*r.numer())
        } else {
            None
        }
    }

    pub fn terms_vec(&self) -> Vec<(RationalAngle, Ratio<i128>)> {
        self.terms.iter().map(|(a, c)| (*a, *c)).collect()
    }

    fn reduced_coeffs(&self) -> Vec<Ratio<i128>> {
        if self.terms.is_empty() {
            return vec![];
        }
        let mut n: i128 = 1;
        for a in self.terms.keys() {
            n = n.lcm(&(a.denom() as i128));
        }
        let n = n as usize;
        let mut coeffs = vec![Ratio::zero(); n];
        for (a, c) in &self.terms {
            let k = (a.numer() as usize) * (n / a.denom() as usize);
            coeffs[k % n] += *c;
        }
        // Remainder of the coefficient polynomial modulo Phi_n.
        let phi = cyclotomic(n as u64);
        let d = phi.len() - 1;
        for k in (d..n).rev() {
            let lead = coeffs[k];
            if lead.is_zero() {
                continue;
            }
            coeffs[k] = Ratio::zero();
            for (j, &pc) in phi.iter().enumerate().take(d) {
                coeffs[k - d + j] -= lead * Ratio::from_integer(pc);
            }
        }
        coeffs.truncate(d.max(1));
        coeffs
    }
}

/// Coefficients of the n-th cyclotomic polynomial, low degree first.
pub fn cyclotomic(n: u64) -> Vec<i128> {
    static CACHE: Mutex<Option<HashMap<u64, Vec<i128>>>> = Mutex::new(None);
    let mut guard = CACHE.lock().unwrap();
    let cache = guard.get_or_insert_with(HashMap::new);
    if let Some(p) = cache.get(&n) {
        return p.clone();
    }
    let result = if n == 1 {
        vec![-1, 1]
    } else {
        // (x^n - 1) / prod_{d | n, d < n} Phi_d, exact integer division.
        let mut poly = vec![0i128; n as usize + 1];
        poly[0] = -1;
        poly[n as usize] = 1;
        drop(guard);
        for d in 1..n {
            if n.is_multiple_of(d) {
                poly = poly_div_exact(&poly, &cyclotomic(d));
            }
        }
        guard = CACHE.lock().unwrap();
        let cache = guard.get_or_insert_with(HashMap::new);
        cache.insert(n, poly.clone());
        return poly;
    };
    cache.insert(n, result.clone());
    result
}

fn poly_div_exact(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    assert!(*den.last().unwrap() == 1, "monic divisor expected");
    let mut quot = vec![0i128; rem.len() - dd];
    for k in (dd..rem.len()).rev() {
        let c = rem[k];
        if c == 0 {
            continue;
        }
        quot[k - dd] = c;
        for (j, &dc) in den.iter().enumerate() {
            rem[k - dd + j] -= c * dc;
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "non-exact polynomial division");
    quot
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_normalization() {
        assert_eq!(RationalAngle::new(5, 4), RationalAngle::new(1, 4));
        assert_eq!(RationalAngle::new(-1, 4), RationalAngle::new(3, 4));
        assert_eq!(RationalAngle::new(2, 4), RationalAngle::HALF);
        assert_eq!(RationalAngle::new(8, 8), RationalAngle::ZERO);
    }

    #[test]
    fn angle_signs() {
        assert_eq!(RationalAngle::ZERO.as_sign(), Some(1));
        assert_eq!(RationalAngle::HALF.as_sign(), Some(-1));
        assert_eq!(RationalAngle::new(1, 4).as_sign(), None);
    }

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(2), vec![1, 1]);
        assert_eq!(cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic(8), vec![1, 0, 0, 0, 1]);
        // prime p: 1 + x + ... + x^(p-1)
        assert_eq!(cyclotomic(5), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn full_root_sum_vanishes() {
        for n in [2u64, 3, 4, 8, 12, 26, 80] {
            let mut s = CycloSum::zero();
            for k in 0..n {
                s.add_unit(RationalAngle::new(k as i64, n as i64));
            }
            assert!(s.is_zero(), "sum of all {n}-th roots");
        }
    }

    #[test]
    fn nontrivial_sum_detected() {
        let mut s = CycloSum::zero();
        s.add_unit(RationalAngle::new(1, 8));
        s.add_unit(RationalAngle::new(3, 8));
        assert!(!s.is_zero());
        // zeta_8 + zeta_8^3 = i*sqrt(2): not rational
        assert!(s.as_rational().is_none());
    }

    #[test]
    fn integer_extraction() {
        let mut s = CycloSum::zero();
        // 1 + zeta_3 + zeta_3^2 + 5 = 5
        for k in 0..3 {
            s.add_unit(RationalAngle::new(k, 3));
        }
        s.add_root(RationalAngle::ZERO, Ratio::from_integer(5));
        assert_eq!(s.as_integer(), Some(5));
        // i - i + 2 = 2 using order-4 roots
        let mut t = CycloSum::zero();
        t.add_unit(RationalAngle::new(1, 4));
        t.add_unit(RationalAngle::new(3, 4));
        t.add_root(RationalAngle::ZERO, Ratio::from_integer(2));
        assert_eq!(t.as_integer(), Some(2));
    }
}
