//! Serre weights det^s ⊗ Sym^r, the sets attached to a representation and
//! to a type, and the gene-based description of their intersection.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::basep::{check_params, pow_p, Modulus, Residue};
use crate::enriched::{lift, serre_of_sigma, sigma_of};
use crate::error::{Error, Result};
use crate::gene::{gene_of_triple, is_degenerate, Gene, Letter};
use crate::triple::{c_digits, c_sequence, v_sequence, CSequence, CSign, CoherentTriple, VSequence};
use crate::weights::{gene_contains, gene_weights, CombinatorialWeight};

/// The Serre weight with parameters s modulo q-1 and r_0, ..., r_{f-1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SerreWeight {
    p: u32,
    f: usize,
    s: BigUint,
    r: Vec<u32>,
}

impl SerreWeight {
    /// Reduces s modulo q-1; rejects digits out of range.
    pub fn new(p: u32, f: usize, s: BigUint, r: Vec<u32>) -> Result<SerreWeight> {
        check_params(p, f)?;
        if r.len() != f {
            return Err(Error::InvalidSerreWeight);
        }
        if let Some(&d) = r.iter().find(|&&d| d >= p) {
            return Err(Error::DigitOutOfRange { digit: d, p });
        }
        let m = pow_p(p, f) - 1u32;
        Ok(SerreWeight { p, f, s: s % m, r })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn f(&self) -> usize {
        self.f
    }

    /// r = (p-1, ..., p-1).
    pub fn is_steinberg(&self) -> bool {
        self.r.iter().all(|&d| d == self.p - 1)
    }

    /// s in [0, q-2].
    pub fn s(&self) -> &BigUint {
        &self.s
    }

    pub fn s_residue(&self) -> Residue {
        Residue::from_biguint(&self.s, Modulus::qm1(self.p, self.f).expect("valid parameters"))
    }

    pub fn r(&self) -> &[u32] {
        &self.r
    }
}

impl Ord for SerreWeight {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.s, &self.r, self.p, self.f).cmp(&(&other.s, &other.r, other.p, other.f))
    }
}

impl PartialOrd for SerreWeight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SerreWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r: Vec<String> = self.r.iter().map(|d| d.to_string()).collect();
        write!(f, "Sym^[{}] ⊗ det^{}", r.join(","), self.s)
    }
}

/// A Serre weight with the sign choices that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightWitness {
    pub epsilon: Option<Vec<u8>>,
    pub epsilon_prime: Option<Vec<u8>>,
    pub weight: SerreWeight,
}

fn q_of(p: u32, f: usize) -> BigInt {
    BigInt::from(pow_p(p, f))
}

/// sum (-1)^eps_i p^i (1 + r_i)
fn signed_sum(p: u32, eps: &[u8], r: &[u32]) -> BigInt {
    let p = BigInt::from(p);
    let mut acc = BigInt::zero();
    for i in (0..r.len()).rev() {
        let d = BigInt::from(1 + r[i]);
        acc = acc * &p + if eps[i] == 1 { -d } else { d };
    }
    acc
}

/// s = (h - sum (-1)^eps_i p^i (1+r_i)) / (q+1) - sum eps_i p^i (1+r_i)
/// modulo q-1, for h given modulo q^2-1.
pub fn s_from_solution(p: u32, f: usize, h: &BigUint, eps: &[u8], r: &[u32]) -> Result<BigUint> {
    let q = q_of(p, f);
    let m2 = &q * &q - 1;
    let hh = BigInt::from(h.clone()).mod_floor(&m2);
    let x = signed_sum(p, eps, r);
    let (quot, rem) = (hh - x).div_mod_floor(&(&q + 1));
    if !rem.is_zero() {
        return Err(Error::NotDivisible);
    }
    let pb = BigInt::from(p);
    let mut tail = BigInt::zero();
    for i in (0..f).rev() {
        tail = tail * &pb + BigInt::from(eps[i] as u32 * (1 + r[i]));
    }
    let s = (quot - tail).mod_floor(&(q - 1));
    Ok(s.to_biguint().unwrap())
}

/// Solutions (eps, r) of h = sum (-1)^eps_i p^i (1+r_i) modulo q+1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RepSolutions {
    pub solutions: Vec<(Vec<u8>, Vec<u32>)>,
    /// How many solutions have r = (p-1, ..., p-1).
    pub steinberg: usize,
}

pub fn rep_solutions(p: u32, f: usize, h: &BigUint) -> Result<RepSolutions> {
    check_params(p, f)?;
    let q = q_of(p, f);
    let qp1 = &q + 1;
    let hh = BigInt::from(h.clone());
    if hh.mod_floor(&qp1).is_zero() {
        return Err(Error::DivisibleByQPlusOne);
    }
    let pb = BigInt::from(p);
    // bounds[k] = p + p^2 + ... + p^k bounds a k-digit signed tail.
    let mut bounds = vec![BigInt::zero(); f + 1];
    for k in 1..=f {
        bounds[k] = &bounds[k - 1] + pow_int(&pb, k);
    }
    let h0 = hh.mod_floor(&qp1);
    let big = &bounds[f];
    let lo = (-big - &h0).div_ceil(&qp1);
    let hi = (big - &h0).div_floor(&qp1);
    let mut out = RepSolutions::default();
    let mut k = lo;
    while k <= hi {
        let target = &h0 + &k * &qp1;
        let mut digits = Vec::with_capacity(f);
        solve_signed(&target, p, f, &bounds, &mut digits, &mut out);
        k += 1;
    }
    out.solutions.sort();
    Ok(out)
}

fn pow_int(p: &BigInt, k: usize) -> BigInt {
    num_traits::pow(p.clone(), k)
}

/// Digits d_i in [-p, -1] u [1, p] with sum d_i p^i = y, low digit first.
fn solve_signed(y: &BigInt, p: u32, f: usize, bounds: &[BigInt], digits: &mut Vec<i64>, out: &mut RepSolutions) {
    let i = digits.len();
    if i == f {
        if y.is_zero() {
            let eps: Vec<u8> = digits.iter().map(|&d| (d < 0) as u8).collect();
            let r: Vec<u32> = digits.iter().map(|&d| d.unsigned_abs() as u32 - 1).collect();
            if r.iter().all(|&x| x == p - 1) {
                out.steinberg += 1;
            }
            out.solutions.push((eps, r));
        }
        return;
    }
    let pb = BigInt::from(p);
    let rho = y.mod_floor(&pb).to_i64().unwrap();
    let pi = p as i64;
    let candidates = if rho == 0 { [pi, -pi] } else { [rho, rho - pi] };
    for d in candidates {
        let rest = (y - BigInt::from(d)) / &pb;
        if rest.abs() <= bounds[f - i - 1] {
            digits.push(d);
            solve_signed(&rest, p, f, bounds, digits, out);
            digits.pop();
        }
    }
}

pub fn weights_of_rep_witnessed(p: u32, f: usize, h: &BigUint) -> Result<Vec<WeightWitness>> {
    let sols = rep_solutions(p, f, h)?;
    sols.solutions
        .into_iter()
        .map(|(eps, r)| {
            let s = s_from_solution(p, f, h, &eps, &r)?;
            Ok(WeightWitness {
                epsilon: Some(eps),
                epsilon_prime: None,
                weight: SerreWeight::new(p, f, s, r)?,
            })
        })
        .collect()
}

/// D(rho-bar) for the representation with parameter h.
pub fn weights_of_rep(p: u32, f: usize, h: &BigUint) -> Result<BTreeSet<SerreWeight>> {
    Ok(weights_of_rep_witnessed(p, f, h)?.into_iter().map(|w| w.weight).collect())
}

/// How r is read off the c-digits and the signs eps'.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableVariant {
    /// (0,0) c, (0,1) c-1, (1,0) p-2-c, (1,1) p-1-c, indexed by (eps'_i, eps'_{i-1}).
    Printed,
    /// The variant solving c_i - r_i = eps'_i (p-2-2r_i) - eps'_{i-1}.
    ProofIdentity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TypeConvention {
    pub sign: CSign,
    pub table: TableVariant,
}

/// The convention reproducing the reference cardinalities (60 type weights,
/// 96 representation weights, 20 common ones).
pub const DEFAULT_CONVENTION: TypeConvention =
    TypeConvention { sign: CSign::GammaMinusGammaPrime, table: TableVariant::Printed };

fn table_r(p: u32, c: u32, cur: u8, prev: u8, table: TableVariant) -> i64 {
    let (p, c) = (p as i64, c as i64);
    match (table, cur, prev) {
        (_, 0, 0) => c,
        (_, 1, 0) => p - 2 - c,
        (TableVariant::Printed, 0, _) => c - 1,
        (TableVariant::Printed, _, _) => p - 1 - c,
        (TableVariant::ProofIdentity, 0, _) => c + 1,
        (TableVariant::ProofIdentity, _, _) => p - 3 - c,
    }
}

/// r from the signs eps' through the table, or None if a digit leaves
/// [0, p-1].
pub fn type_r(p: u32, c: &[u32], eps_prime: &[u8], table: TableVariant) -> Option<Vec<u32>> {
    let f = c.len();
    (0..f)
        .map(|i| {
            let v = table_r(p, c[i], eps_prime[i], eps_prime[(i + f - 1) % f], table);
            (0..p as i64).contains(&v).then_some(v as u32)
        })
        .collect()
}

/// s = gamma' + sum eps'_i (p-1-r_i) p^i modulo q-1.
pub fn type_s(p: u32, f: usize, gamma_prime: &BigUint, eps_prime: &[u8], r: &[u32]) -> BigUint {
    let m = pow_p(p, f) - 1u32;
    let pb = BigUint::from(p);
    let mut acc = BigUint::zero();
    for i in (0..f).rev() {
        acc = acc * &pb + BigUint::from(eps_prime[i] as u32 * (p - 1 - r[i]));
    }
    (acc + gamma_prime) % m
}

/// The closed formula gamma' + (eps'_{f-1}(q-1) + sum (c_i - r_i) p^i) / 2,
/// when the numerator is even.
pub fn type_s_halved(p: u32, f: usize, gamma_prime: &BigUint, c: &[u32], eps_prime: &[u8], r: &[u32]) -> Option<BigUint> {
    let q = q_of(p, f);
    let mut n: BigInt = BigInt::from(eps_prime[f - 1]) * (&q - 1);
    let pb = BigInt::from(p);
    let mut pw = BigInt::from(1u32);
    for i in 0..f {
        n += (BigInt::from(c[i]) - BigInt::from(r[i])) * &pw;
        pw *= &pb;
    }
    if n.is_odd() {
        return None;
    }
    let s: BigInt = (BigInt::from(gamma_prime.clone()) + n / 2i32).mod_floor(&(q - 1i32));
    s.to_biguint()
}

pub fn c_of_type(p: u32, f: usize, gamma: &BigUint, gamma_prime: &BigUint, sign: CSign) -> Result<CSequence> {
    let m = Modulus::qm1(p, f)?;
    Ok(c_digits(&Residue::from_biguint(gamma, m), &Residue::from_biguint(gamma_prime, m), sign))
}

pub fn weights_of_type_witnessed(
    p: u32,
    f: usize,
    gamma: &BigUint,
    gamma_prime: &BigUint,
    conv: TypeConvention,
) -> Result<Vec<WeightWitness>> {
    let c = c_of_type(p, f, gamma, gamma_prime, conv.sign)?;
    let gp = gamma_prime % (pow_p(p, f) - 1u32);
    let mut out = Vec::new();
    for mask in 0u64..1 << f {
        let e: Vec<u8> = (0..f).map(|i| (mask >> i & 1) as u8).collect();
        let Some(r) = type_r(p, c.digits(), &e, conv.table) else { continue };
        let s = type_s(p, f, &gp, &e, &r);
        out.push(WeightWitness {
            epsilon: None,
            epsilon_prime: Some(e),
            weight: SerreWeight::new(p, f, s, r)?,
        });
    }
    Ok(out)
}

/// D(t) for the type with parameters gamma, gamma'.
pub fn weights_of_type(p: u32, f: usize, gamma: &BigUint, gamma_prime: &BigUint) -> Result<BTreeSet<SerreWeight>> {
    weights_of_type_with(p, f, gamma, gamma_prime, DEFAULT_CONVENTION)
}

pub fn weights_of_type_with(
    p: u32,
    f: usize,
    gamma: &BigUint,
    gamma_prime: &BigUint,
    conv: TypeConvention,
) -> Result<BTreeSet<SerreWeight>> {
    Ok(weights_of_type_witnessed(p, f, gamma, gamma_prime, conv)?
        .into_iter()
        .map(|w| w.weight)
        .collect())
}

/// D(t, rho-bar) as the intersection of the two direct enumerations.
pub fn common_weights_oracle(t: &CoherentTriple) -> BTreeSet<SerreWeight> {
    let rep = weights_of_rep(t.p(), t.f(), &t.h().value()).expect("coherent triple");
    let ty = weights_of_type(t.p(), t.f(), &t.gamma().value(), &t.gamma_prime().value())
        .expect("valid parameters");
    rep.intersection(&ty).cloned().collect()
}

/// The signs eps' producing (s, r) from the type of t, if any.
pub fn recover_epsilon_prime(t: &CoherentTriple, w: &SerreWeight) -> Option<Vec<u8>> {
    let (p, f) = (t.p(), t.f());
    let c = c_sequence(t);
    let c = c.digits();
    let gp = t.gamma_prime().value();
    let mut found = None;
    for start in 0..2u8 {
        let mut e = vec![0u8; f];
        let mut prev = start;
        let mut ok = true;
        for i in 0..f {
            let cur = (0..2u8).find(|&x| table_r(p, c[i], x, prev, TableVariant::Printed) == w.r[i] as i64);
            match cur {
                Some(x) => {
                    e[i] = x;
                    prev = x;
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && e[f - 1] == start && type_s(p, f, &gp, &e, &w.r) == w.s {
            debug_assert!(found.is_none(), "two sign choices for one weight");
            found = Some(e);
        }
    }
    found
}

/// Gene, digit sequences and the bits delta_i = [X_i ~ X_{i+f}] of a triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecipeContext {
    pub gene: Gene,
    pub v: VSequence,
    pub c: CSequence,
    pub delta: Vec<u8>,
}

impl RecipeContext {
    pub fn new(t: &CoherentTriple) -> RecipeContext {
        let gene = gene_of_triple(t);
        let f = gene.f() as i64;
        let delta = (0..f).map(|i| gene.get(i).similar(gene.get(i + f)) as u8).collect();
        RecipeContext { gene, v: v_sequence(t), c: c_sequence(t), delta }
    }

    pub fn delta_at(&self, i: i64) -> u8 {
        self.delta[i.rem_euclid(self.delta.len() as i64) as usize]
    }
}

/// r_{f-1-i} for every i, read from the gene, the v-digits and w.
pub fn recipe_r(ctx: &RecipeContext, p: u32, w: &CombinatorialWeight) -> Vec<i64> {
    let f = ctx.gene.f();
    let p = p as i64;
    let mut r = vec![0i64; f];
    for i in 0..f as i64 {
        let eq = w.get(i - 1) == ctx.delta_at(i - 1);
        let wi = w.get(i) as i64;
        let o_digit = if ctx.gene.get(i) == Letter::O {
            Some(ctx.v.get(i) as i64)
        } else if ctx.gene.get(i + f as i64) == Letter::O {
            Some(ctx.v.get(i + f as i64) as i64)
        } else {
            None
        };
        let value = match (o_digit, eq) {
            (Some(v), true) => v - 1 - wi,
            (Some(v), false) => p - 1 - v + wi,
            (None, true) => wi * (p - 1),
            (None, false) => p - 2 + wi,
        };
        r[f - 1 - i as usize] = value;
    }
    r
}

/// eps'_{i0} and i0 as chosen by the closed recipe.
fn closed_form_anchor(ctx: &RecipeContext, p: u32, w: &CombinatorialWeight, r: &[i64]) -> Result<(usize, u8)> {
    let f = ctx.gene.f();
    let half = (p as i64 - 1) / 2;
    let c = ctx.c.digits();
    if let Some(i0) = (0..f).find(|&i| c[i] as i64 != half) {
        let ci = c[i0] as i64;
        let e = if r[i0] == ci || r[i0] == ci - 1 { 0 } else { 1 };
        return Ok((i0, e));
    }
    let col = (0..f as i64)
        .find(|&j| ctx.gene.get(j) == Letter::O || ctx.gene.get(j + f as i64) == Letter::O)
        .ok_or(Error::DegenerateGene)?;
    let i0 = f - 1 - col as usize;
    let k = f as i64 - 2 - i0 as i64;
    let e = if w.get(k) == ctx.delta_at(k) { 0 } else { 1 };
    Ok((i0, e))
}

/// s from the closed formula with anchor i0: the factor of p^i is q when
/// i <= i0 and 1 otherwise, so that the sum telescopes onto eps'_{i0}.
pub fn closed_form_s(t: &CoherentTriple, ctx: &RecipeContext, w: &CombinatorialWeight, r: &[i64]) -> Result<BigUint> {
    let (p, f) = (t.p(), t.f());
    let (i0, e) = closed_form_anchor(ctx, p, w, r)?;
    let q = q_of(p, f);
    let pb = BigInt::from(p);
    let mut n: BigInt = BigInt::from(e) * (&q - 1);
    let mut pw = BigInt::from(1u32);
    for (i, &ri) in r.iter().enumerate() {
        let lam = if i <= i0 { q.clone() } else { BigInt::from(1u32) };
        n += lam * (BigInt::from(ctx.c.digits()[i]) - BigInt::from(ri)) * &pw;
        pw *= &pb;
    }
    if n.is_odd() {
        return Err(Error::NonIntegralS);
    }
    let s: BigInt = (BigInt::from(t.gamma_prime().value()) + n / 2i32).mod_floor(&(q - 1i32));
    Ok(s.to_biguint().unwrap())
}

/// The Serre weight attached to a combinatorial weight of the gene of t.
pub fn serre_of_combinatorial(t: &CoherentTriple, w: &CombinatorialWeight) -> Result<SerreWeight> {
    let ctx = RecipeContext::new(t);
    serre_of_combinatorial_in(t, &ctx, w)
}

pub fn serre_of_combinatorial_in(t: &CoherentTriple, ctx: &RecipeContext, w: &CombinatorialWeight) -> Result<SerreWeight> {
    let g = &ctx.gene;
    if !gene_contains(g, w) {
        return Err(Error::NotAWeight);
    }
    let r = recipe_r(ctx, t.p(), w);
    let hat = lift(g, w).ok_or(Error::NotAWeight)?;
    let normative = serre_of_sigma(t, &sigma_of(t, g, &hat))?;
    debug_assert_eq!(
        normative.r().iter().map(|&x| x as i64).collect::<Vec<_>>(),
        r,
        "recipe r disagrees with the sequence pipeline"
    );
    debug_assert!(
        is_degenerate(g) && closed_form_anchor(ctx, t.p(), w, &r).is_err()
            || closed_form_s(t, ctx, w, &r).as_ref() == Ok(normative.s()),
        "closed form s disagrees with the sequence pipeline"
    );
    Ok(normative)
}

/// D(t, rho-bar) as the image of the combinatorial weights.
pub fn common_weights_fast(t: &CoherentTriple) -> BTreeSet<SerreWeight> {
    let ctx = RecipeContext::new(t);
    gene_weights(&ctx.gene)
        .iter()
        .map(|w| serre_of_combinatorial_in(t, &ctx, w).expect("weights of the gene"))
        .collect()
}

/// Pairs (w, S(w)) in weight order.
pub fn common_weights_paired(t: &CoherentTriple) -> Vec<(CombinatorialWeight, SerreWeight)> {
    let ctx = RecipeContext::new(t);
    gene_weights(&ctx.gene)
        .into_iter()
        .map(|w| {
            let s = serre_of_combinatorial_in(t, &ctx, &w).expect("weights of the gene");
            (w, s)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triple::make_triple;

    fn b(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn tstar() -> CoherentTriple {
        make_triple(5, 7, &b(4865171564), &b(58923), &b(77258)).unwrap()
    }

    #[test]
    fn reference_cardinalities() {
        assert_eq!(weights_of_rep(5, 7, &b(4865171564)).unwrap().len(), 96);
        assert_eq!(weights_of_type(5, 7, &b(58923), &b(77258)).unwrap().len(), 60);
        assert_eq!(common_weights_oracle(&tstar()).len(), 20);
    }

    #[test]
    fn rendering() {
        let w = SerreWeight::new(5, 7, b(77758), vec![4, 2, 1, 0, 4, 3, 3]).unwrap();
        assert_eq!(w.to_string(), "Sym^[4,2,1,0,4,3,3] ⊗ det^77758");
        assert!(weights_of_rep(5, 7, &b(4865171564)).unwrap().contains(&w));
    }

    #[test]
    fn equal_gammas_give_zero_r() {
        let ws = weights_of_type_witnessed(5, 3, &b(7), &b(7), DEFAULT_CONVENTION).unwrap();
        let zero = ws.iter().find(|w| w.epsilon_prime.as_deref() == Some(&[0, 0, 0][..])).unwrap();
        assert_eq!(zero.weight.r(), &[0, 0, 0]);
    }

    #[test]
    fn reference_recipe() {
        let t = tstar();
        let ctx = RecipeContext::new(&t);
        assert_eq!(ctx.delta, vec![1, 1, 0, 0, 0, 1, 1]);
        let w = CombinatorialWeight::new(vec![0, 0, 1, 0, 0, 0, 1]);
        let s = serre_of_combinatorial(&t, &w).unwrap();
        assert_eq!(s.to_string(), "Sym^[4,2,1,0,4,3,3] ⊗ det^77758");
        assert_eq!(common_weights_fast(&t), common_weights_oracle(&t));
    }
}
