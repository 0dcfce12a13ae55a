//! Coherent triples (h, gamma, gamma') and their digit sequences v and c.

use num_bigint::BigUint;

use crate::basep::{self, DigitVector, ModKind, Modulus, Residue};
use crate::error::{Error, Result};

/// Parameters (h mod q^2-1, gamma mod q-1, gamma' mod q-1).
///
/// `h` and `q h` describe the same representation but are kept apart.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoherentTriple {
    p: u32,
    f: usize,
    h: Residue,
    gamma: Residue,
    gamma_prime: Residue,
}

pub fn make_triple(
    p: u32,
    f: usize,
    h: &BigUint,
    gamma: &BigUint,
    gamma_prime: &BigUint,
) -> Result<CoherentTriple> {
    let m2 = Modulus::q2m1(p, f)?;
    let m1 = m2.with_kind(ModKind::QM1);
    CoherentTriple::from_residues(
        Residue::from_biguint(h, m2),
        Residue::from_biguint(gamma, m1),
        Residue::from_biguint(gamma_prime, m1),
    )
}

/// Same as [`make_triple`] with every input given as big-endian base-p digits.
pub fn make_triple_from_digits(
    p: u32,
    f: usize,
    h: &[u32],
    gamma: &[u32],
    gamma_prime: &[u32],
) -> Result<CoherentTriple> {
    let m2 = Modulus::q2m1(p, f)?;
    let m1 = m2.with_kind(ModKind::QM1);
    let conv = |d: &[u32], m| basep::digits_to_residue(&DigitVector::new(p, d.to_vec())?, m);
    CoherentTriple::from_residues(conv(h, m2)?, conv(gamma, m1)?, conv(gamma_prime, m1)?)
}

impl CoherentTriple {
    pub fn from_residues(h: Residue, gamma: Residue, gamma_prime: Residue) -> Result<Self> {
        let m2 = h.modulus();
        if m2.kind() != ModKind::Q2M1
            || gamma.modulus() != m2.with_kind(ModKind::QM1)
            || gamma_prime.modulus() != gamma.modulus()
        {
            return Err(Error::ModulusMismatch);
        }
        if h.divisible_by_qp1() {
            return Err(Error::DivisibleByQPlusOne);
        }
        let rhs = gamma
            .add(&gamma_prime)?
            .add(&basep::repunit(gamma.modulus())?)?;
        if h.fold_to_qm1()? != rhs {
            return Err(Error::DeterminantMismatch);
        }
        Ok(CoherentTriple { p: m2.p(), f: m2.f(), h, gamma, gamma_prime })
    }

    /// The triple with v-digits `v` (width 2f) and the given gamma'.
    ///
    /// h = v + (q+1) gamma' and gamma = h - gamma' - (q-1)/(p-1) modulo q-1.
    pub fn from_v_and_gamma_prime(v: &[u32], gamma_prime: Residue) -> Result<Self> {
        let m1 = gamma_prime.modulus();
        let m2 = m1.with_kind(ModKind::Q2M1);
        let vr = Residue::from_canonical_digits(v.to_vec(), m2)?;
        let h = vr.add(&gamma_prime.times_qp1()?)?;
        let gamma = h
            .fold_to_qm1()?
            .sub(&gamma_prime)?
            .sub(&basep::repunit(m1)?)?;
        Self::from_residues(h, gamma, gamma_prime)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn q(&self) -> BigUint {
        self.h.modulus().q()
    }

    pub fn h(&self) -> &Residue {
        &self.h
    }

    pub fn gamma(&self) -> &Residue {
        &self.gamma
    }

    pub fn gamma_prime(&self) -> &Residue {
        &self.gamma_prime
    }

    pub fn modulus_qm1(&self) -> Modulus {
        self.gamma.modulus()
    }

    pub fn modulus_q2m1(&self) -> Modulus {
        self.h.modulus()
    }

    /// The same type with the roles of gamma and gamma' exchanged.
    pub fn swapped(&self) -> CoherentTriple {
        CoherentTriple {
            gamma: self.gamma_prime.clone(),
            gamma_prime: self.gamma.clone(),
            ..self.clone()
        }
    }
}

/// v_0, ..., v_{2f-1}, read 2f-periodically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VSequence {
    p: u32,
    digits: Vec<u32>,
}

impl VSequence {
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn f(&self) -> usize {
        self.digits.len() / 2
    }

    pub fn get(&self, i: i64) -> u32 {
        self.digits[i.rem_euclid(self.digits.len() as i64) as usize]
    }
}

/// Digits of (h - (q+1) gamma') modulo q^2 - 1.
pub fn v_sequence(t: &CoherentTriple) -> VSequence {
    let r = t
        .h
        .sub(&t.gamma_prime.times_qp1().expect("gamma' lives modulo q-1"))
        .expect("same modulus");
    VSequence { p: t.p, digits: r.digits().unwrap().to_vec() }
}

/// c_0, ..., c_{f-1}, low digit first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CSequence {
    digits: Vec<u32>,
}

impl CSequence {
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn get(&self, i: i64) -> u32 {
        self.digits[i.rem_euclid(self.digits.len() as i64) as usize]
    }
}

/// Which difference of gamma and gamma' the c-digits expand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CSign {
    GammaMinusGammaPrime,
    GammaPrimeMinusGamma,
}

/// The sign that reproduces the weight-set cardinalities of the reference
/// example; see the calibration tests in `serre`.
pub const DEFAULT_C_SIGN: CSign = CSign::GammaMinusGammaPrime;

pub fn c_sequence(t: &CoherentTriple) -> CSequence {
    c_sequence_with(t, DEFAULT_C_SIGN)
}

pub fn c_sequence_with(t: &CoherentTriple, sign: CSign) -> CSequence {
    c_digits(&t.gamma, &t.gamma_prime, sign)
}

pub(crate) fn c_digits(gamma: &Residue, gamma_prime: &Residue, sign: CSign) -> CSequence {
    let d = match sign {
        CSign::GammaMinusGammaPrime => gamma.sub(gamma_prime),
        CSign::GammaPrimeMinusGamma => gamma_prime.sub(gamma),
    }
    .expect("same modulus");
    let mut digits = d.digits().unwrap().to_vec();
    digits.reverse();
    CSequence { digits }
}
