//! Residues modulo q - 1, q + 1 and q^2 - 1 (q = p^f).
//!
//! Residues modulo q - 1 and q^2 - 1 are kept as big-endian base-p digit
//! vectors of width f and 2f. Since p^k = 1 modulo p^k - 1, reduction folds
//! digit blocks, multiplication by p is a rotation and negation is digitwise.
//! Residues modulo q + 1 are plain big integers.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Which of the three moduli a residue lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModKind {
    /// q - 1
    QM1,
    /// q + 1
    QP1,
    /// q^2 - 1
    Q2M1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Modulus {
    p: u32,
    f: usize,
    kind: ModKind,
}

pub fn is_odd_prime(p: u32) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Checks the standing assumptions p odd prime and f >= 2.
pub fn check_params(p: u32, f: usize) -> Result<()> {
    if !is_odd_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    if f < 2 {
        return Err(Error::InvalidDegree(f));
    }
    Ok(())
}

impl Modulus {
    pub fn new(p: u32, f: usize, kind: ModKind) -> Result<Self> {
        check_params(p, f)?;
        Ok(Modulus { p, f, kind })
    }

    pub fn qm1(p: u32, f: usize) -> Result<Self> {
        Self::new(p, f, ModKind::QM1)
    }

    pub fn qp1(p: u32, f: usize) -> Result<Self> {
        Self::new(p, f, ModKind::QP1)
    }

    pub fn q2m1(p: u32, f: usize) -> Result<Self> {
        Self::new(p, f, ModKind::Q2M1)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn kind(&self) -> ModKind {
        self.kind
    }

    /// Same p and f, other kind.
    pub fn with_kind(&self, kind: ModKind) -> Modulus {
        Modulus { kind, ..*self }
    }

    /// Number of digits in the rotation representation, if any.
    pub fn width(&self) -> Option<usize> {
        match self.kind {
            ModKind::QM1 => Some(self.f),
            ModKind::Q2M1 => Some(2 * self.f),
            ModKind::QP1 => None,
        }
    }

    pub fn q(&self) -> BigUint {
        BigUint::from(self.p).pow(self.f as u32)
    }

    pub fn value(&self) -> BigUint {
        let q = self.q();
        match self.kind {
            ModKind::QM1 => q - 1u32,
            ModKind::QP1 => q + 1u32,
            ModKind::Q2M1 => &q * &q - 1u32,
        }
    }
}

/// Big-endian base-p digits: digit i multiplies p^(k-1-i).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitVector {
    p: u32,
    digits: Vec<u32>,
}

impl DigitVector {
    pub fn new(p: u32, digits: Vec<u32>) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d >= p) {
            return Err(Error::DigitOutOfRange { digit: d, p });
        }
        Ok(DigitVector { p, digits })
    }

    /// Digits of `n`, left padded with zeros to at least `width` digits.
    pub fn from_biguint(p: u32, n: &BigUint, width: usize) -> Self {
        let mut digits = to_radix_be(n, p);
        if digits.len() < width {
            let mut padded = vec![0; width - digits.len()];
            padded.extend(digits);
            digits = padded;
        }
        DigitVector { p, digits }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn value(&self) -> BigUint {
        from_radix_be(&self.digits, self.p)
    }
}

fn to_radix_be(n: &BigUint, p: u32) -> Vec<u32> {
    if n.is_zero() {
        return Vec::new();
    }
    if p <= 256 {
        return n.to_radix_be(p).into_iter().map(u32::from).collect();
    }
    let mut out = Vec::new();
    let mut m = n.clone();
    let base = BigUint::from(p);
    while !m.is_zero() {
        out.push((&m % &base).to_u32().unwrap());
        m /= &base;
    }
    out.reverse();
    out
}

fn from_radix_be(digits: &[u32], p: u32) -> BigUint {
    if p <= 256 {
        let bytes: Vec<u8> = digits.iter().map(|&d| d as u8).collect();
        return BigUint::from_radix_be(&bytes, p).unwrap_or_else(BigUint::zero);
    }
    digits
        .iter()
        .fold(BigUint::zero(), |acc, &d| acc * p + d)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    /// Canonical digits: never all p - 1.
    Digits(Vec<u32>),
    Big(BigUint),
}

/// A canonical residue. Equality is equality of residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    modulus: Modulus,
    repr: Repr,
}

impl Residue {
    pub fn zero(m: Modulus) -> Residue {
        let repr = match m.width() {
            Some(k) => Repr::Digits(vec![0; k]),
            None => Repr::Big(BigUint::zero()),
        };
        Residue { modulus: m, repr }
    }

    pub fn from_biguint(n: &BigUint, m: Modulus) -> Residue {
        let reduced = n % m.value();
        match m.width() {
            Some(k) => {
                let d = DigitVector::from_biguint(m.p, &reduced, k);
                Residue { modulus: m, repr: Repr::Digits(d.digits) }
            }
            None => Residue { modulus: m, repr: Repr::Big(reduced) },
        }
    }

    pub fn from_u64(n: u64, m: Modulus) -> Residue {
        Self::from_biguint(&BigUint::from(n), m)
    }

    /// Builds a residue directly from width-k digits (k = f or 2f).
    pub fn from_canonical_digits(digits: Vec<u32>, m: Modulus) -> Result<Residue> {
        let k = m.width().ok_or(Error::NoRotationLaw)?;
        if digits.len() != k {
            return digits_to_residue(&DigitVector::new(m.p, digits)?, m);
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= m.p) {
            return Err(Error::DigitOutOfRange { digit: d, p: m.p });
        }
        let mut r = Residue { modulus: m, repr: Repr::Digits(digits) };
        r.normalize();
        Ok(r)
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// Canonical big-endian digits for rotation moduli.
    pub fn digits(&self) -> Option<&[u32]> {
        match &self.repr {
            Repr::Digits(d) => Some(d),
            Repr::Big(_) => None,
        }
    }

    pub fn residue_digits(&self) -> DigitVector {
        match &self.repr {
            Repr::Digits(d) => DigitVector { p: self.modulus.p, digits: d.clone() },
            Repr::Big(n) => DigitVector::from_biguint(self.modulus.p, n, 0),
        }
    }

    pub fn value(&self) -> BigUint {
        match &self.repr {
            Repr::Digits(d) => from_radix_be(d, self.modulus.p),
            Repr::Big(n) => n.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Digits(d) => d.iter().all(|&x| x == 0),
            Repr::Big(n) => n.is_zero(),
        }
    }

    fn normalize(&mut self) {
        let pm1 = self.modulus.p - 1;
        if let Repr::Digits(d) = &mut self.repr {
            if d.iter().all(|&x| x == pm1) {
                d.iter_mut().for_each(|x| *x = 0);
            }
        }
    }

    pub fn add(&self, other: &Residue) -> Result<Residue> {
        res_add(self, other)
    }

    pub fn neg(&self) -> Residue {
        res_neg(self)
    }

    pub fn sub(&self, other: &Residue) -> Result<Residue> {
        res_add(self, &res_neg(other))
    }

    pub fn mul_pk(&self, k: i64) -> Result<Residue> {
        res_mul_pk(self, k)
    }

    /// Reduction modulo q - 1 of a residue modulo q^2 - 1 (fold the halves).
    pub fn fold_to_qm1(&self) -> Result<Residue> {
        if self.modulus.kind != ModKind::Q2M1 {
            return Err(Error::ModulusMismatch);
        }
        let f = self.modulus.f;
        let d = self.digits().unwrap();
        let m = self.modulus.with_kind(ModKind::QM1);
        let hi = Residue { modulus: m, repr: Repr::Digits(d[..f].to_vec()) };
        let lo = Residue { modulus: m, repr: Repr::Digits(d[f..].to_vec()) };
        let mut hi = hi;
        hi.normalize();
        let mut lo = lo;
        lo.normalize();
        res_add(&hi, &lo)
    }

    /// Reduction modulo q + 1 of a residue modulo q^2 - 1.
    pub fn reduce_to_qp1(&self) -> Result<Residue> {
        if self.modulus.kind != ModKind::Q2M1 {
            return Err(Error::ModulusMismatch);
        }
        Ok(Residue::from_biguint(&self.value(), self.modulus.with_kind(ModKind::QP1)))
    }

    /// Whether q + 1 divides the canonical representative.
    pub fn divisible_by_qp1(&self) -> bool {
        match (&self.repr, self.modulus.kind) {
            (Repr::Digits(d), ModKind::Q2M1) => {
                let f = self.modulus.f;
                d[..f] == d[f..]
            }
            (Repr::Big(n), ModKind::QP1) => n.is_zero(),
            _ => (self.value() % self.modulus.with_kind(ModKind::QP1).value()).is_zero(),
        }
    }

    /// (q + 1) x modulo q^2 - 1 for x modulo q - 1 (the digits of x repeated).
    pub fn times_qp1(&self) -> Result<Residue> {
        if self.modulus.kind != ModKind::QM1 {
            return Err(Error::ModulusMismatch);
        }
        let d = self.digits().unwrap();
        let mut out = d.to_vec();
        out.extend_from_slice(d);
        Ok(Residue {
            modulus: self.modulus.with_kind(ModKind::Q2M1),
            repr: Repr::Digits(out),
        })
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl PartialOrd for Residue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Residue {
    /// Orders by canonical value (then by modulus, to stay total).
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.repr, &other.repr) {
            (Repr::Digits(a), Repr::Digits(b)) if a.len() == b.len() => {
                a.cmp(b).then_with(|| self.modulus.p.cmp(&other.modulus.p))
            }
            _ => self
                .value()
                .cmp(&other.value())
                .then_with(|| self.modulus.p.cmp(&other.modulus.p)),
        }
    }
}

/// Value of a digit vector reduced modulo `m`.
pub fn digits_to_residue(d: &DigitVector, m: Modulus) -> Result<Residue> {
    if d.p != m.p {
        return Err(Error::MismatchedPrime { expected: m.p, found: d.p });
    }
    let Some(k) = m.width() else {
        return Ok(Residue::from_biguint(&d.value(), m));
    };
    // p^k = 1, so blocks of k digits (aligned from the right) just add up.
    let mut acc = Residue::zero(m);
    let n = d.digits.len();
    let mut end = n;
    while end > 0 {
        let start = end.saturating_sub(k);
        let mut block = vec![0; k - (end - start)];
        block.extend_from_slice(&d.digits[start..end]);
        let mut r = Residue { modulus: m, repr: Repr::Digits(block) };
        r.normalize();
        acc = res_add(&acc, &r)?;
        end = start;
    }
    Ok(acc)
}

pub fn res_add(a: &Residue, b: &Residue) -> Result<Residue> {
    if a.modulus != b.modulus {
        return Err(Error::ModulusMismatch);
    }
    let m = a.modulus;
    match (&a.repr, &b.repr) {
        (Repr::Digits(x), Repr::Digits(y)) => {
            let p = m.p as u64;
            let mut out = vec![0u32; x.len()];
            let mut carry = 0u64;
            for i in (0..x.len()).rev() {
                let s = x[i] as u64 + y[i] as u64 + carry;
                out[i] = (s % p) as u32;
                carry = s / p;
            }
            // End-around carry: p^k = 1. Cannot overflow twice for canonical inputs.
            let mut i = out.len();
            while carry > 0 && i > 0 {
                i -= 1;
                let s = out[i] as u64 + carry;
                out[i] = (s % p) as u32;
                carry = s / p;
            }
            let mut r = Residue { modulus: m, repr: Repr::Digits(out) };
            r.normalize();
            Ok(r)
        }
        (Repr::Big(x), Repr::Big(y)) => {
            let mv = m.value();
            let mut s = x + y;
            if s >= mv {
                s -= mv;
            }
            Ok(Residue { modulus: m, repr: Repr::Big(s) })
        }
        _ => Err(Error::ModulusMismatch),
    }
}

pub fn res_neg(a: &Residue) -> Residue {
    let m = a.modulus;
    match &a.repr {
        Repr::Digits(x) => {
            let pm1 = m.p - 1;
            let mut r = Residue {
                modulus: m,
                repr: Repr::Digits(x.iter().map(|&d| pm1 - d).collect()),
            };
            r.normalize();
            r
        }
        Repr::Big(x) => {
            if x.is_zero() {
                a.clone()
            } else {
                Residue { modulus: m, repr: Repr::Big(m.value() - x) }
            }
        }
    }
}

/// a * p^k, as a left rotation of the digits. Negative k rotates right.
pub fn res_mul_pk(a: &Residue, k: i64) -> Result<Residue> {
    match &a.repr {
        Repr::Digits(x) => {
            let n = x.len() as i64;
            let s = k.rem_euclid(n) as usize;
            let mut y = x.clone();
            y.rotate_left(s);
            Ok(Residue { modulus: a.modulus, repr: Repr::Digits(y) })
        }
        Repr::Big(_) => Err(Error::NoRotationLaw),
    }
}

/// (a / (q+1)) modulo q - 1 for a residue a modulo q^2 - 1 divisible by q + 1.
pub fn exact_div_qp1(a: &Residue) -> Result<Residue> {
    if a.modulus.kind != ModKind::Q2M1 {
        return Err(Error::ModulusMismatch);
    }
    // a = x (q + 1) = x q + x with x < q - 1: both halves equal the digits of x.
    if !a.divisible_by_qp1() {
        return Err(Error::NotDivisible);
    }
    let f = a.modulus.f;
    let d = a.digits().unwrap();
    Ok(Residue {
        modulus: a.modulus.with_kind(ModKind::QM1),
        repr: Repr::Digits(d[..f].to_vec()),
    })
}

/// (q - 1) / (p - 1) modulo q - 1: all digits equal to one.
pub fn repunit(m: Modulus) -> Result<Residue> {
    let k = m.width().ok_or(Error::NoRotationLaw)?;
    let mut r = Residue { modulus: m, repr: Repr::Digits(vec![1; k]) };
    r.normalize();
    Ok(r)
}

/// Residue of a signed integer.
pub fn residue_of_signed(n: &num_bigint::BigInt, m: Modulus) -> Residue {
    use num_bigint::Sign;
    let mv = num_bigint::BigInt::from(m.value());
    let mut r = n % &mv;
    if r.sign() == Sign::Minus {
        r += &mv;
    }
    Residue::from_biguint(&r.to_biguint().unwrap(), m)
}

/// p^k as a big integer.
pub fn pow_p(p: u32, k: usize) -> BigUint {
    let mut r = BigUint::one();
    let b = BigUint::from(p);
    for _ in 0..k {
        r *= &b;
    }
    r
}
