//! Finite fields with exact table-based arithmetic, multiplicative and tame
//! characters, norm maps, Frobenius orbits, and admissible-pair data.

use crate::angle::RationalAngle;
use num_integer::Integer;
use thiserror::Error;

/// Hard cap on table-based field orders.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FfError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("field order {0} exceeds the table cap {MAX_FIELD_ORDER}")]
    OrderTooLarge(u64),
    #[error("{0} does not define a subfield of the field of order {1}")]
    NotASubfield(u64, u64),
    #[error("character of exponent {exponent} mod {modulus} does not descend through the norm")]
    NoDescent { exponent: u64, modulus: u64 },
    #[error("residue character is not regular: orbit length {found}, expected {expected}")]
    NotRegular { found: u32, expected: u32 },
    #[error("pair is not non-cuspidal: f = {f} gives odd block count e = {e}")]
    NotNonCuspidal { f: u32, e: u32 },
    #[error("character modulus {found} does not match the unit group of order {expected}")]
    ModulusMismatch { found: u64, expected: u64 },
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Global parameters of one run: residue cardinalities and degrees.
///
/// `q` is the cardinality of the base residue field, `big_q = q^delta` the
/// cardinality of the coefficient residue field, and `d = 2*delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldParams {
    pub p: u64,
    /// q = p^m0
    pub q: u64,
    pub delta: u32,
    /// Q = q^delta
    pub big_q: u64,
    pub d: u32,
}

impl FieldParams {
    pub fn new(p: u64, m0: u32, delta: u32) -> Result<Self, FfError> {
        if p == 2 || !is_prime(p) {
            return Err(FfError::NotOddPrime(p));
        }
        assert!(m0 >= 1 && delta >= 1);
        let q = p.checked_pow(m0).expect("q overflow");
        let big_q = q.checked_pow(delta).expect("Q overflow");
        let d = 2 * delta;
        // The largest field the pipeline touches is F_{Q^2}.
        let top = big_q.checked_mul(big_q).expect("Q^2 overflow");
        if top > MAX_FIELD_ORDER {
            return Err(FfError::OrderTooLarge(top));
        }
        Ok(FieldParams { p, q, delta, big_q, d })
    }

    /// Convenience constructor from `q` itself (detects `p`, `m0`).
    pub fn from_q(q: u64, delta: u32) -> Result<Self, FfError> {
        let ps = prime_factors(q);
        if ps.len() != 1 {
            return Err(FfError::NotOddPrime(q));
        }
        let p = ps[0];
        let mut m0 = 0;
        let mut t = q;
        while t > 1 {
            t /= p;
            m0 += 1;
        }
        FieldParams::new(p, m0, delta)
    }
}

/// A finite field `F_{p^m}` with exact arithmetic.
///
/// Elements are residues of `F_p[x]` modulo the first monic irreducible of
/// degree `m` (coefficient vectors enumerated as base-`p` integers, constant
/// term in the lowest digit), encoded as that integer. A fixed primitive
/// element (the smallest in encoding order) indexes exp/log tables.
#[derive(Debug, Clone)]
pub struct FiniteField {
    pub p: u64,
    pub m: u32,
    pub order: u64,
    /// Encoded coefficients of the modulus, including the leading monic term.
    pub modulus: Vec<u64>,
    pub generator: u64,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl FiniteField {
    pub fn new(p: u64, m: u32) -> Result<Self, FfError> {
        if !is_prime(p) {
            return Err(FfError::NotOddPrime(p));
        }
        let order = p.checked_pow(m).expect("order overflow");
        if order > MAX_FIELD_ORDER {
            return Err(FfError::OrderTooLarge(order));
        }
        let modulus = smallest_irreducible(p, m);
        let mut field = FiniteField {
            p,
            m,
            order,
            modulus,
            generator: 0,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.generator = field.find_generator();
        field.build_tables();
        Ok(field)
    }

    pub fn of_order(order: u64) -> Result<Self, FfError> {
        let ps = prime_factors(order);
        if ps.len() != 1 {
            return Err(FfError::NotOddPrime(order));
        }
        let p = ps[0];
        let mut m = 0;
        let mut t = order;
        while t > 1 {
            t /= p;
            m += 1;
        }
        FiniteField::new(p, m)
    }

    pub fn units(&self) -> u64 {
        self.order - 1
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        1
    }

    fn digits(&self, a: u64) -> Vec<u64> {
        let mut out = vec![0; self.m as usize];
        let mut a = a;
        for d in out.iter_mut() {
            *d = a % self.p;
            a /= self.p;
        }
        out
    }

    fn undigits(&self, ds: &[u64]) -> u64 {
        ds.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.undigits(&sum)
    }

    pub fn neg(&self, a: u64) -> u64 {
        let da = self.digits(a);
        let nd: Vec<u64> = da.iter().map(|&x| (self.p - x) % self.p).collect();
        self.undigits(&nd)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let l = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % self.units();
        self.exp[l as usize] as u64
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        let l = (self.units() - self.log[a as usize] as u64) % self.units();
        self.exp[l as usize] as u64
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let l = (self.log[a as usize] as u128 * e as u128) % self.units() as u128;
        self.exp[l as usize] as u64
    }

    /// Discrete log with respect to the fixed generator; `None` for 0.
    pub fn log(&self, a: u64) -> Option<u64> {
        if a == 0 {
            None
        } else {
            Some(self.log[a as usize] as u64)
        }
    }

    pub fn from_log(&self, k: u64) -> u64 {
        self.exp[(k % self.units()) as usize] as u64
    }

    pub fn minus_one(&self) -> u64 {
        self.neg(1)
    }

    /// Absolute trace down to the prime field, returned as a digit in `0..p`.
    pub fn trace_to_prime(&self, a: u64) -> u64 {
        let mut acc = 0;
        let mut t = a;
        for _ in 0..self.m {
            acc = self.add(acc, t);
            t = self.pow(t, self.p);
        }
        debug_assert!(acc < self.p, "trace must land in the prime field");
        acc
    }

    /// True iff `a` lies in the subfield of order `s`.
    pub fn in_subfield(&self, a: u64, s: u64) -> bool {
        a == 0 || self.pow(a, s) == a
    }

    /// Additive character value `e^(2*pi*i*tr(a)/p)` with the absolute trace.
    pub fn additive_char(&self, a: u64) -> RationalAngle {
        RationalAngle::new(self.trace_to_prime(a) as i64, self.p as i64)
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.order
    }

    // -- construction helpers --

    fn poly_mul_mod(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let m = self.m as usize;
        let mut prod = vec![0u64; 2 * m];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % self.p;
            }
        }
        // reduce by the monic modulus
        for k in (m..2 * m).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (j, &mj) in self.modulus.iter().enumerate().take(m) {
                let idx = k - m + j;
                prod[idx] = (prod[idx] + c * (self.p - mj)) % self.p;
            }
        }
        prod.truncate(m);
        prod
    }

    fn raw_mul(&self, a: u64, b: u64) -> u64 {
        self.undigits(&self.poly_mul_mod(&self.digits(a), &self.digits(b)))
    }

    fn raw_pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.raw_mul(acc, base);
            }
            base = self.raw_mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn find_generator(&self) -> u64 {
        let n = self.units();
        let factors = prime_factors(n);
        'cand: for g in 2..self.order {
            for &f in &factors {
                if self.raw_pow(g, n / f) == 1 {
                    continue 'cand;
                }
            }
            return g;
        }
        unreachable!("cyclic unit group always has a generator");
    }

    fn build_tables(&mut self) {
        let n = self.units() as usize;
        self.exp = Vec::with_capacity(n);
        self.log = vec![u32::MAX; self.order as usize];
        let mut cur = 1u64;
        for i in 0..n {
            self.exp.push(cur as u32);
            self.log[cur as usize] = i as u32;
            cur = self.raw_mul(cur, self.generator);
        }
        debug_assert_eq!(cur, 1, "generator order must be order-1");
    }
}

/// The first monic irreducible of degree `m` over `F_p`, coefficient vectors
/// enumerated as base-`p` integers.
fn smallest_irreducible(p: u64, m: u32) -> Vec<u64> {
    if m == 1 {
        return vec![0, 1];
    }
    let pm = p.pow(m);
    for low in 0..pm {
        let mut coeffs = Vec::with_capacity(m as usize + 1);
        let mut a = low;
        for _ in 0..m {
            coeffs.push(a % p);
            a /= p;
        }
        coeffs.push(1);
        if poly_is_irreducible(p, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree");
}

fn poly_is_irreducible(p: u64, f: &[u64]) -> bool {
    let m = (f.len() - 1) as u32;
    // x^(p^m) == x mod f, and x^(p^(m/l)) != x for every prime l | m.
    let xq = |e: u32| -> Vec<u64> {
        // x^(p^e) mod f by repeated p-th powering
        let mut cur = vec![0u64, 1];
        cur.resize(f.len() - 1, 0);
        for _ in 0..e {
            cur = poly_pow_mod(p, &cur, p, f);
        }
        cur
    };
    let x = {
        let mut v = vec![0u64, 1];
        v.resize(f.len() - 1, 0);
        v
    };
    if xq(m) != x {
        return false;
    }
    for l in prime_factors(m as u64) {
        let e = m / l as u32;
        let mut diff = xq(e);
        // diff -= x
        diff[1] = (diff[1] + p - 1) % p;
        if poly_gcd_is_const(p, &diff, f) {
            continue;
        }
        return false;
    }
    true
}

fn poly_pow_mod(p: u64, a: &[u64], mut e: u64, f: &[u64]) -> Vec<u64> {
    let mut base = a.to_vec();
    let mut acc = vec![0u64; f.len() - 1];
    acc[0] = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod_f(p, &acc, &base, f);
        }
        base = poly_mul_mod_f(p, &base, &base, f);
        e >>= 1;
    }
    acc
}

fn poly_mul_mod_f(p: u64, a: &[u64], b: &[u64], f: &[u64]) -> Vec<u64> {
    let m = f.len() - 1;
    let mut prod = vec![0u64; 2 * m];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    for k in (m..2 * m).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (j, &fj) in f.iter().enumerate().take(m) {
            prod[k - m + j] = (prod[k - m + j] + c * (p - fj)) % p;
        }
    }
    prod.truncate(m);
    prod
}

fn poly_gcd_is_const(p: u64, a: &[u64], b: &[u64]) -> bool {
    let norm = |v: &mut Vec<u64>| {
        while v.len() > 1 && *v.last().unwrap() == 0 {
            v.pop();
        }
    };
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    norm(&mut a);
    norm(&mut b);
    while b.len() > 1 || b[0] != 0 {
        // a mod b
        let db = b.len() - 1;
        let lead_inv = mod_inv(*b.last().unwrap(), p);
        while a.len() > db && !(a.len() == 1 && a[0] == 0) {
            let da = a.len() - 1;
            if da < db {
                break;
            }
            let c = (a[da] * lead_inv) % p;
            if c != 0 {
                for j in 0..=db {
                    let idx = da - db + j;
                    a[idx] = (a[idx] + (p - (c * b[j]) % p)) % p;
                }
            }
            norm(&mut a);
            if a.len() == 1 && a[0] == 0 {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
        norm(&mut b);
        if b.len() == 1 && b[0] == 0 {
            break;
        }
    }
    a.len() == 1 && a[0] != 0
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// A multiplicative character of the cyclic unit group of a field of order
/// `modulus + 1`, determined by its exponent with respect to the fixed
/// generator: the value at `g^k` is `e^(2*pi*i*exponent*k/modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MulCharacter {
    /// Order of the unit group the character lives on.
    pub modulus: u64,
    pub exponent: u64,
}

impl MulCharacter {
    pub fn new(modulus: u64, exponent: u64) -> Self {
        MulCharacter {
            modulus,
            exponent: exponent % modulus,
        }
    }

    pub fn trivial(modulus: u64) -> Self {
        MulCharacter::new(modulus, 0)
    }

    pub fn is_trivial(&self) -> bool {
        self.exponent == 0
    }

    pub fn order(&self) -> u64 {
        if self.exponent == 0 {
            1
        } else {
            self.modulus / self.modulus.gcd(&self.exponent)
        }
    }

    /// Value at the element `g^k`.
    pub fn eval_log(&self, k: u64) -> RationalAngle {
        let e = ((self.exponent as u128 * k as u128) % self.modulus as u128) as i64;
        RationalAngle::new(e, self.modulus as i64)
    }

    /// Value at a field element (must be a unit of `field`).
    pub fn eval(&self, field: &FiniteField, x: u64) -> RationalAngle {
        debug_assert_eq!(field.units(), self.modulus);
        self.eval_log(field.log(x).expect("character at zero"))
    }

    pub fn mul(&self, rhs: &MulCharacter) -> MulCharacter {
        assert_eq!(self.modulus, rhs.modulus);
        MulCharacter::new(self.modulus, (self.exponent + rhs.exponent) % self.modulus)
    }

    pub fn inverse(&self) -> MulCharacter {
        MulCharacter::new(self.modulus, (self.modulus - self.exponent) % self.modulus)
    }

    /// Precomposition with the Frobenius `x -> x^q`, i.e. the Galois twist.
    pub fn frobenius_twist(&self, q: u64, nu: u32) -> MulCharacter {
        let mut e = self.exponent as u128;
        for _ in 0..nu {
            e = (e * q as u128) % self.modulus as u128;
        }
        MulCharacter::new(self.modulus, e as u64)
    }
}

/// Length of the orbit of `chi` under repeated precomposition with `x -> x^q`.
pub fn frobenius_orbit_length(chi: &MulCharacter, q: u64) -> u32 {
    let n = chi.modulus as u128;
    let a = chi.exponent as u128;
    let mut cur = a;
    for f in 1..=128 {
        cur = (cur * q as u128) % n;
        if cur == a {
            return f;
        }
    }
    unreachable!("orbit length bounded by the multiplicative order of q");
}

/// The unique character `chi0` with `chi = chi0 o N` along the norm of the
/// quadratic extension, when it exists.
pub fn norm_descend(chi: &MulCharacter, big_q: u64) -> Result<MulCharacter, FfError> {
    assert_eq!(chi.modulus, big_q * big_q - 1, "character must live upstairs");
    let norm_exp = big_q + 1;
    if !chi.exponent.is_multiple_of(norm_exp) {
        return Err(FfError::NoDescent {
            exponent: chi.exponent,
            modulus: chi.modulus,
        });
    }
    Ok(MulCharacter::new(big_q - 1, chi.exponent / norm_exp))
}

/// Inflation along the norm: the character `chi0 o N` upstairs.
pub fn norm_inflate(chi0: &MulCharacter, big_q: u64) -> MulCharacter {
    assert_eq!(chi0.modulus, big_q - 1);
    MulCharacter::new(big_q * big_q - 1, chi0.exponent * (big_q + 1))
}

fn subfield_index(chi_modulus: u64, s: u64) -> Result<u64, FfError> {
    let p_order = chi_modulus + 1;
    let sub_units = s - 1;
    let same_prime = {
        let pf = prime_factors(p_order);
        let sf = prime_factors(s);
        pf.len() == 1 && sf.len() == 1 && pf[0] == sf[0]
    };
    if s < 2 || !same_prime || !chi_modulus.is_multiple_of(sub_units) {
        return Err(FfError::NotASubfield(s, p_order));
    }
    Ok(chi_modulus / sub_units)
}

/// True iff `chi` is trivial on the units of the subfield of order `s`.
pub fn is_trivial_on_subfield(chi: &MulCharacter, s: u64) -> Result<bool, FfError> {
    let idx = subfield_index(chi.modulus, s)?;
    Ok((chi.exponent as u128 * idx as u128).is_multiple_of(chi.modulus as u128))
}

/// True iff `chi` is trivial on the squares of the units of the subfield of
/// order `s`.
pub fn is_trivial_on_squares(chi: &MulCharacter, s: u64) -> Result<bool, FfError> {
    let idx = subfield_index(chi.modulus, s)?;
    Ok((chi.exponent as u128 * idx as u128 * 2).is_multiple_of(chi.modulus as u128))
}

/// A tame character: a character of the units mod the wild part together with
/// a root-of-unity value at the fixed uniformizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TameCharacter {
    pub residue: MulCharacter,
    pub unif_value: RationalAngle,
}

impl TameCharacter {
    pub fn new(residue: MulCharacter, unif_value: RationalAngle) -> Self {
        TameCharacter { residue, unif_value }
    }

    pub fn trivial(modulus: u64) -> Self {
        TameCharacter {
            residue: MulCharacter::trivial(modulus),
            unif_value: RationalAngle::ZERO,
        }
    }

    /// Value at `unif^i * u` where `u` is the unit `g^k`.
    pub fn eval(&self, unif_exp: i64, unit_log: u64) -> RationalAngle {
        self.unif_value.mul_int(unif_exp) + self.residue.eval_log(unit_log)
    }

    pub fn mul(&self, rhs: &TameCharacter) -> TameCharacter {
        TameCharacter {
            residue: self.residue.mul(&rhs.residue),
            unif_value: self.unif_value + rhs.unif_value,
        }
    }
}

/// All data derived from an admissible pair `(K_f, chi_f)` in the totally
/// ramified setting: the inflated character upstairs, its norm descent, and
/// the central-character diagnostics the distinction pipeline needs.
#[derive(Debug, Clone)]
pub struct PairData {
    pub params: FieldParams,
    /// Galois orbit length of the residue character.
    pub f: u32,
    /// e = d / f (even in the non-cuspidal regime).
    pub e: u32,
    /// gcd(e, 2); always 2 here.
    pub e_prime: u32,
    pub chi_f: TameCharacter,
    /// Residue of the inflated character on the unit group of order Q^2 - 1.
    pub chi_bar: MulCharacter,
    /// Norm descent of `chi_bar`, a character mod Q - 1.
    pub chi0_bar: MulCharacter,
    /// Value of the inflated character at the uniformizer.
    pub chi_unif: RationalAngle,
}

impl PairData {
    pub fn f_even(&self) -> bool {
        self.f.is_multiple_of(2)
    }

    /// `chi0_bar` twisted by the `nu`-th Frobenius power.
    pub fn chi1_bar(&self, nu: u32) -> MulCharacter {
        self.chi0_bar.frobenius_twist(self.params.q, nu)
    }

    /// True iff the residue of the central character is trivial on the base
    /// residue field units (equivalently `chi0_bar` is `{-1,1}`-valued there).
    pub fn central_residue_trivial(&self) -> bool {
        is_trivial_on_subfield(&self.chi_bar, self.params.q).expect("base subfield")
    }

    /// True iff the central character kills the uniformizer of the base field.
    pub fn central_unif_trivial(&self) -> bool {
        self.chi_unif.mul_int(2).is_zero()
    }

    /// Order of `chi0_bar` restricted to the base residue field units.
    ///
    /// The subgroup of order q-1 is generated by `g^((Q-1)/(q-1))` and the
    /// value there at step `j` is `e^(2 pi i * exponent * j / (q-1))`, so the
    /// restriction is the character of exponent `exponent mod (q-1)`.
    pub fn chi0_order_on_k(&self) -> u64 {
        MulCharacter::new(
            self.params.q - 1,
            self.chi0_bar.exponent % (self.params.q - 1),
        )
        .order()
    }

    /// True iff `chi0_bar` is trivial on the subfield of order `q^(f/2)`
    /// (only meaningful for even `f`).
    pub fn chi0_trivial_on_half(&self) -> bool {
        assert!(self.f_even());
        let s = self.params.q.pow(self.f / 2);
        is_trivial_on_subfield(&self.chi0_bar, s).expect("half subfield")
    }

    /// The scalar attached to the uniformizer action on the extended type:
    /// `chi_f((-1)^(e-1) * unif)`.
    pub fn zeta(&self) -> RationalAngle {
        let n = self.chi_f.residue.modulus;
        let minus_one_log = if self.e.is_multiple_of(2) { n / 2 } else { 0 };
        self.chi_f.unif_value + self.chi_f.residue.eval_log(minus_one_log)
    }
}

/// Builds all derived characters of an admissible pair.
///
/// `chi_f` must live on the units of the field of order `q^f`; its residue
/// part must have full Galois orbit length `f`, and the block count
/// `e = d/f` must be even for the non-cuspidal regime.
pub fn build_pair_data(
    params: &FieldParams,
    f: u32,
    chi_f: TameCharacter,
) -> Result<PairData, FfError> {
    let qf = params.q.checked_pow(f).expect("q^f overflow");
    if chi_f.residue.modulus != qf - 1 {
        return Err(FfError::ModulusMismatch {
            found: chi_f.residue.modulus,
            expected: qf - 1,
        });
    }
    let orbit = frobenius_orbit_length(&chi_f.residue, params.q);
    if orbit != f {
        return Err(FfError::NotRegular {
            found: orbit,
            expected: f,
        });
    }
    if !params.d.is_multiple_of(f) || !(params.d / f).is_multiple_of(2) {
        let e = if params.d.is_multiple_of(f) { params.d / f } else { 1 };
        return Err(FfError::NotNonCuspidal { f, e });
    }
    let e = params.d / f;
    let qd = params.big_q * params.big_q;
    let inflate = (qd - 1) / (qf - 1);
    let chi_bar = MulCharacter::new(
        qd - 1,
        ((chi_f.residue.exponent as u128 * inflate as u128) % (qd - 1) as u128) as u64,
    );
    debug_assert_eq!(frobenius_orbit_length(&chi_bar, params.q), f);
    let chi0_bar = norm_descend(&chi_bar, params.big_q)?;
    let chi_unif = chi_f.unif_value.mul_int(e as i64);
    Ok(PairData {
        params: *params,
        f,
        e,
        e_prime: 2,
        chi_f,
        chi_bar,
        chi0_bar,
        chi_unif,
    })
}

/// Representatives of the Galois orbits of regular residue characters of
/// orbit length exactly `f` on the units of `F_{q^f}` (smallest exponent in
/// each orbit).
pub fn regular_orbit_representatives(q: u64, f: u32) -> Vec<u64> {
    let n = q.pow(f) - 1;
    let mut seen = vec![false; n as usize];
    let mut reps = Vec::new();
    for a in 0..n {
        if seen[a as usize] {
            continue;
        }
        let mut orbit = vec![a];
        let mut cur = (a as u128 * q as u128 % n as u128) as u64;
        while cur != a {
            orbit.push(cur);
            cur = (cur as u128 * q as u128 % n as u128) as u64;
        }
        for &x in &orbit {
            seen[x as usize] = true;
        }
        if orbit.len() == f as usize {
            reps.push(a);
        }
    }
    reps
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_exhaustive_small_orders() {
        for order in [3u64, 9, 27, 81] {
            let f = FiniteField::of_order(order).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
            }
            // associativity and distributivity on full triples
            for a in f.elements() {
                for b in f.elements() {
                    for c in f.elements() {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn exp_log_roundtrip() {
        for order in [5u64, 9, 25, 27, 81, 729] {
            let f = FiniteField::of_order(order).unwrap();
            for a in 1..order {
                assert_eq!(f.from_log(f.log(a).unwrap()), a);
            }
            // generator order
            for e in 1..f.units() {
                assert_ne!(f.pow(f.generator, e), 1, "generator order too small");
            }
            assert_eq!(f.pow(f.generator, f.units()), 1);
        }
    }

    #[test]
    fn trace_lands_in_prime_field() {
        let f = FiniteField::of_order(27).unwrap();
        for a in f.elements() {
            let t = f.trace_to_prime(a);
            assert!(t < 3);
        }
        // trace is additive and surjective
        let mut seen = [false; 3];
        for a in f.elements() {
            seen[f.trace_to_prime(a) as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn orbit_length_examples() {
        // trivial character fixed by all Galois action
        assert_eq!(frobenius_orbit_length(&MulCharacter::new(80, 0), 3), 1);
        // q=3, Q=9: exponent 20 mod 80 has orbit {20, 60}
        let chi = MulCharacter::new(80, 20);
        assert_eq!(frobenius_orbit_length(&chi, 3), 2);
        let mut orbit = vec![chi.exponent];
        let mut cur = chi.exponent * 3 % 80;
        while cur != chi.exponent {
            orbit.push(cur);
            cur = cur * 3 % 80;
        }
        orbit.sort_unstable();
        assert_eq!(orbit, vec![20, 60]);
        // q=3, Q=27: exponent 1 mod 26 has orbit {1,3,9}
        assert_eq!(frobenius_orbit_length(&MulCharacter::new(26, 1), 3), 3);
    }

    #[test]
    fn orbit_length_divides_galois_order() {
        // all characters mod Q^2-1 for (q,delta) in {(3,1),(3,2)}
        for (q, delta) in [(3u64, 1u32), (3, 2)] {
            let d = 2 * delta;
            let n = q.pow(d) - 1;
            for a in 0..n {
                let f = frobenius_orbit_length(&MulCharacter::new(n, a), q);
                assert_eq!(d % f, 0, "orbit {f} must divide {d} (a={a})");
            }
        }
    }

    #[test]
    fn norm_descend_examples() {
        // a = 0 -> exponent 0
        assert_eq!(
            norm_descend(&MulCharacter::new(80, 0), 9).unwrap(),
            MulCharacter::new(8, 0)
        );
        // Q=9, a=20 -> exponent 2 mod 8 (10*2 = 20)
        assert_eq!(
            norm_descend(&MulCharacter::new(80, 20), 9).unwrap(),
            MulCharacter::new(8, 2)
        );
        // Q=9, a=1 -> no descent; brute force: no b works
        assert!(norm_descend(&MulCharacter::new(80, 1), 9).is_err());
        for b in 0..8u64 {
            assert_ne!((9 + 1) * b % 80, 1, "no exponent b may solve 10b=1 mod 80");
        }
    }

    #[test]
    fn norm_descend_inflate_roundtrip_exhaustive() {
        for big_q in [3u64, 9, 27] {
            let n = big_q * big_q - 1;
            for a in 0..n {
                let chi = MulCharacter::new(n, a);
                if let Ok(chi0) = norm_descend(&chi, big_q) {
                    assert_eq!(norm_inflate(&chi0, big_q), chi);
                    // pointwise identity chi0(N(x)) = chi(x) on all units
                    let f2 = FiniteField::of_order(big_q * big_q).unwrap();
                    for k in 0..n {
                        let x = f2.from_log(k);
                        let nx = f2.pow(x, big_q + 1);
                        let lognx = f2.log(nx).unwrap();
                        assert_eq!(lognx % (big_q + 1), 0);
                        assert_eq!(chi0.eval_log(lognx / (big_q + 1)), chi.eval_log(k));
                    }
                }
            }
        }
    }

    #[test]
    fn galois_orbit_of_descent_has_same_length() {
        for (q, delta) in [(3u64, 1u32), (3, 2), (3, 3)] {
            let big_q = q.pow(delta);
            let n = big_q * big_q - 1;
            for a in 0..n {
                let chi = MulCharacter::new(n, a);
                if let Ok(chi0) = norm_descend(&chi, big_q) {
                    assert_eq!(
                        frobenius_orbit_length(&chi, q),
                        frobenius_orbit_length(&chi0, q),
                        "orbit lengths must agree (Q={big_q}, a={a})"
                    );
                }
            }
        }
    }

    #[test]
    fn subfield_triviality_examples() {
        // trivial character is trivial on every subfield
        for s in [3u64, 9] {
            assert!(is_trivial_on_subfield(&MulCharacter::new(80, 0), s).unwrap());
        }
        // Q=27 exponent 1 on F_3: value at g^13 is zeta_26^13 = -1
        let chi = MulCharacter::new(26, 1);
        assert!(!is_trivial_on_subfield(&chi, 3).unwrap());
        assert_eq!(chi.eval_log(13).as_sign(), Some(-1));
        // brute force over the 2 elements of F_3^* inside F_27^*
        let f = FiniteField::of_order(27).unwrap();
        let emb = f.from_log(26 / 2);
        assert_eq!(f.mul(emb, emb), 1, "index-13 power generates F_3^*");
        // Q=9 exponent 2 on F_3: 2*4 = 8 = 0 mod 8
        assert!(is_trivial_on_subfield(&MulCharacter::new(8, 2), 3).unwrap());
        // error path
        assert!(is_trivial_on_subfield(&MulCharacter::new(8, 1), 4).is_err());
        assert!(is_trivial_on_subfield(&MulCharacter::new(26, 1), 9).is_err());
    }

    #[test]
    fn squares_triviality_examples() {
        // squares of F_3^* = {1}: always trivial
        assert!(is_trivial_on_squares(&MulCharacter::new(8, 1), 3).unwrap());
        assert!(is_trivial_on_squares(&MulCharacter::new(26, 1), 3).unwrap());
        // Q=25, exponent 12, subfield F_5: brute force over square classes
        let chi = MulCharacter::new(24, 12);
        let expected = is_trivial_on_squares(&chi, 5).unwrap();
        let f = FiniteField::of_order(25).unwrap();
        let mut all_one = true;
        for k in 0..24u64 {
            let x = f.from_log(k);
            if !f.in_subfield(x, 5) {
                continue;
            }
            let sq_log = f.log(f.mul(x, x)).unwrap();
            if !chi.eval_log(sq_log).is_zero() {
                all_one = false;
            }
        }
        assert_eq!(expected, all_one);
    }

    #[test]
    fn build_pair_examples() {
        // q=3, delta=2, f=2, residue exponent 1 mod 8
        let params = FieldParams::new(3, 1, 2).unwrap();
        let chi_f = TameCharacter::new(MulCharacter::new(8, 1), RationalAngle::ZERO);
        let pd = build_pair_data(&params, 2, chi_f).unwrap();
        assert_eq!(pd.chi_bar, MulCharacter::new(80, 10));
        assert_eq!(pd.chi0_bar, MulCharacter::new(8, 1));
        assert_eq!(pd.e, 2);
        // identity chi_bar(x) = chi_f(N(x)) checked on all 80 units
        let f81 = FiniteField::of_order(81).unwrap();
        for k in 0..80u64 {
            let x = f81.from_log(k);
            let nx = f81.pow(x, (81 - 1) / (9 - 1));
            let lognx = f81.log(nx).unwrap();
            assert_eq!(lognx % 10, 0);
            assert_eq!(
                pd.chi_f.residue.eval_log(lognx / 10),
                pd.chi_bar.eval_log(k)
            );
        }

        // q=3, delta=3, f=3, exponent 1 mod 26: accepted with e = 2
        let params = FieldParams::new(3, 1, 3).unwrap();
        let chi_f = TameCharacter::new(MulCharacter::new(26, 1), RationalAngle::ZERO);
        let pd = build_pair_data(&params, 3, chi_f).unwrap();
        assert_eq!(pd.e, 2);
        assert_eq!(pd.e_prime, 2);

        // q=3, delta=2, f=4: not non-cuspidal (4 does not divide 2)
        let params = FieldParams::new(3, 1, 2).unwrap();
        let chi_f = TameCharacter::new(MulCharacter::new(80, 1), RationalAngle::ZERO);
        assert!(matches!(
            build_pair_data(&params, 4, chi_f),
            Err(FfError::NotNonCuspidal { .. })
        ));
    }

    #[test]
    fn non_regular_pair_rejected() {
        let params = FieldParams::new(3, 1, 2).unwrap();
        // exponent 0 mod 8 has orbit length 1, not 2
        let chi_f = TameCharacter::new(MulCharacter::new(8, 0), RationalAngle::ZERO);
        assert!(matches!(
            build_pair_data(&params, 2, chi_f),
            Err(FfError::NotRegular { .. })
        ));
        // exponent 4 mod 8 is fixed by multiplication by 3
        let chi_f = TameCharacter::new(MulCharacter::new(8, 4), RationalAngle::ZERO);
        assert!(matches!(
            build_pair_data(&params, 2, chi_f),
            Err(FfError::NotRegular { .. })
        ));
    }

    #[test]
    fn order_cap_enforced() {
        assert!(matches!(
            FiniteField::new(3, 20),
            Err(FfError::OrderTooLarge(_))
        ));
        assert!(matches!(
            FieldParams::new(3, 1, 7),
            Err(FfError::OrderTooLarge(_))
        ));
    }

    #[test]
    fn regular_orbit_reps() {
        // q=3, f=2: orbits of size 2 mod 8: {1,3}, {2,6}, {5,7}
        assert_eq!(regular_orbit_representatives(3, 2), vec![1, 2, 5]);
        // q=3, f=1: all characters mod 2
        assert_eq!(regular_orbit_representatives(3, 1), vec![0, 1]);
        // q=3, f=3 mod 26: 8 orbits of size 3
        assert_eq!(regular_orbit_representatives(3, 3).len(), 8);
    }

    #[test]
    fn central_character_diagnostics() {
        let params = FieldParams::new(3, 1, 3).unwrap();
        let chi_f = TameCharacter::new(MulCharacter::new(26, 1), RationalAngle::ZERO);
        let pd = build_pair_data(&params, 3, chi_f).unwrap();
        // chi0 of exponent 1 mod 26 restricted to F_3^* has order 2
        assert!(pd.central_residue_trivial());
        assert_eq!(pd.chi0_order_on_k(), 2);
        assert!(pd.central_unif_trivial());
    }

    #[test]
    fn zeta_value() {
        // q=3, delta=2, f=2, e=2: zeta = chi_f(-unif): residue part at -1
        let params = FieldParams::new(3, 1, 2).unwrap();
        let chi_f = TameCharacter::new(MulCharacter::new(8, 1), RationalAngle::new(1, 4));
        let pd = build_pair_data(&params, 2, chi_f).unwrap();
        // -1 = g^4 in F_9, so residue contributes zeta_8^4 = -1; unif part i
        assert_eq!(pd.zeta(), RationalAngle::new(1, 4) + RationalAngle::HALF);
    }
}
