//! Active sequences, mutations and enriched weights: the sequence-level
//! description of common Serre weights.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gene::{fragments, gene_of_triple, is_degenerate, is_viable, Class, Fragment, Gene, Letter};
use crate::serre::{s_from_solution, SerreWeight};
use crate::triple::{v_sequence, CoherentTriple};
use crate::weights::{CombinatorialWeight, Pair};

/// A 2f-periodic integer sequence (sigma_i).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeriodicIntSequence {
    values: Vec<i64>,
}

impl PeriodicIntSequence {
    pub fn new(values: Vec<i64>) -> PeriodicIntSequence {
        assert!(!values.is_empty() && values.len() % 2 == 0, "period must be 2f");
        PeriodicIntSequence { values }
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn f(&self) -> usize {
        self.values.len() / 2
    }

    pub fn get(&self, i: i64) -> i64 {
        self.values[i.rem_euclid(self.values.len() as i64) as usize]
    }
}

/// A 2f-periodic integer mask (chi_i) driving a mutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NumericalMask {
    values: Vec<i64>,
}

impl NumericalMask {
    pub fn new(values: Vec<i64>) -> NumericalMask {
        assert!(!values.is_empty() && values.len() % 2 == 0, "period must be 2f");
        NumericalMask { values }
    }

    pub fn zero(f: usize) -> NumericalMask {
        NumericalMask { values: vec![0; 2 * f] }
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn get(&self, i: i64) -> i64 {
        self.values[i.rem_euclid(self.values.len() as i64) as usize]
    }

    pub fn neg(&self) -> NumericalMask {
        NumericalMask { values: self.values.iter().map(|x| -x).collect() }
    }
}

/// sigma_i - chi_i + p chi_{i-1}.
pub fn mutate(sigma: &PeriodicIntSequence, chi: &NumericalMask, p: u32) -> PeriodicIntSequence {
    assert_eq!(sigma.values.len(), chi.values.len(), "periods differ");
    let p = p as i64;
    let values = (0..sigma.values.len() as i64)
        .map(|i| sigma.get(i) - chi.get(i) + p * chi.get(i - 1))
        .collect();
    PeriodicIntSequence { values }
}

pub fn is_active_pair(x: i64, y: i64, p: u32) -> bool {
    let p = p as i64;
    let edge = |z: i64| z == 0 || z == p;
    (0..=p).contains(&x) && (0..=p).contains(&y) && (edge(x) || edge(y)) && x != y
}

pub fn is_active(sigma: &PeriodicIntSequence, p: u32) -> bool {
    let f = sigma.f() as i64;
    (0..f).all(|i| is_active_pair(sigma.get(i), sigma.get(i + f), p))
}

/// sum sigma_i p^(2f-1-i) = h - (q+1) gamma' modulo q^2 - 1.
pub fn is_compatible(sigma: &PeriodicIntSequence, t: &CoherentTriple) -> bool {
    if sigma.f() != t.f() {
        return false;
    }
    let p = BigInt::from(t.p());
    let m = BigInt::from(t.modulus_q2m1().value());
    let mut acc = BigInt::zero();
    for &x in &sigma.values {
        acc = acc * &p + BigInt::from(x);
    }
    let target = BigInt::from(v_sequence_value(t));
    (acc - target).mod_floor(&m).is_zero()
}

fn v_sequence_value(t: &CoherentTriple) -> BigUint {
    let p = BigUint::from(t.p());
    v_sequence(t)
        .digits()
        .iter()
        .fold(BigUint::zero(), |acc, &d| acc * &p + BigUint::from(d))
}

pub fn v_as_sequence(t: &CoherentTriple) -> PeriodicIntSequence {
    PeriodicIntSequence { values: v_sequence(t).digits().iter().map(|&d| d as i64).collect() }
}

/// A 2f-periodic sequence over {a, b}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EnrichedWeight {
    hat: Vec<Class>,
}

impl EnrichedWeight {
    pub fn new(hat: Vec<Class>) -> EnrichedWeight {
        assert!(!hat.is_empty() && hat.len() % 2 == 0, "period must be 2f");
        EnrichedWeight { hat }
    }

    pub fn f(&self) -> usize {
        self.hat.len() / 2
    }

    pub fn letters(&self) -> &[Class] {
        &self.hat
    }

    pub fn get(&self, i: i64) -> Class {
        self.hat[i.rem_euclid(self.hat.len() as i64) as usize]
    }

    /// The enriched weight with column pairs (w_i, w_{i+f}) taken from
    /// `cols`.
    pub fn from_columns(cols: &[Pair]) -> EnrichedWeight {
        let f = cols.len();
        let mut hat = vec![Class::B; 2 * f];
        for (i, &c) in cols.iter().enumerate() {
            let (x, y) = pair_classes(c);
            hat[i] = x;
            hat[i + f] = y;
        }
        EnrichedWeight { hat }
    }
}

impl fmt::Display for EnrichedWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.hat.iter().map(|c| c.to_string()).collect();
        f.write_str(&s)
    }
}

fn pair_classes(c: Pair) -> (Class, Class) {
    match c {
        Pair::BB => (Class::B, Class::B),
        Pair::AB => (Class::A, Class::B),
        Pair::BA => (Class::B, Class::A),
    }
}

fn swap(c: Pair) -> Pair {
    match c {
        Pair::AB => Pair::BA,
        Pair::BA => Pair::AB,
        Pair::BB => Pair::BB,
    }
}

/// Pairs (w_i^up, w_i^down) attached to a fragment.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FragmentaryEnrichedWeight {
    pairs: Vec<(Class, Class)>,
}

impl FragmentaryEnrichedWeight {
    pub fn pairs(&self) -> &[(Class, Class)] {
        &self.pairs
    }
}

/// chi_i = 1 iff w_i equals the class of X_i.
pub fn mask_of(g: &Gene, w: &EnrichedWeight) -> NumericalMask {
    let n = 2 * g.f() as i64;
    NumericalMask { values: (0..n).map(|i| (w.get(i) == g.get(i).class()) as i64).collect() }
}

/// The sequence attached to an enriched weight: v mutated by its mask.
pub fn sigma_of(t: &CoherentTriple, g: &Gene, w: &EnrichedWeight) -> PeriodicIntSequence {
    mutate(&v_as_sequence(t), &mask_of(g, w), t.p())
}

/// Bit i is 1 iff w_i = w_{i+f}.
pub fn delta(w: &EnrichedWeight) -> CombinatorialWeight {
    let f = w.f();
    CombinatorialWeight::new((0..f).map(|i| (w.hat[i] == w.hat[i + f]) as u8).collect())
}

/// delta on letters: 1 if equal, 0 otherwise.
pub fn delta_letters(x: Class, y: Class) -> u8 {
    (x == y) as u8
}

/// Whether column i may carry `cur` after column i-1 carries `prev`, with
/// `prev` read as (w_{i-1}, w_{i-1+f}).
///
/// Covers the pair conditions at column i and the conditions attached to
/// the letters O at positions i and i+f.
pub fn column_transition_allowed(g: &Gene, i: i64, prev: Pair, cur: Pair) -> bool {
    let f = g.f() as i64;
    let lam = |j: i64| g.get(j).class();
    let (p0, p1) = pair_classes(prev);
    let (c0, c1) = pair_classes(cur);
    let (x, y) = (g.get(i), g.get(i + f));
    if x == Letter::O && (p0 == lam(i - 1) || c1 != Class::B) {
        return false;
    }
    if y == Letter::O && (p1 == lam(i - 1 + f) || c0 != Class::B) {
        return false;
    }
    if x == Letter::O || y == Letter::O {
        return true;
    }
    match cur {
        Pair::BB => (lam(i - 1) == lam(i - 1 + f)) == (p0 != p1),
        Pair::AB => (p0 == Class::A) == (lam(i) == lam(i - 1)),
        Pair::BA => (p1 == Class::A) == (lam(i + f) == lam(i - 1 + f)),
    }
}

/// Active enriched weights of a gene, as column-pair cycles, optionally
/// restricted to those projecting to `w`.
fn enriched_cycles(g: &Gene, w: Option<&CombinatorialWeight>, first_only: bool) -> Vec<Vec<Pair>> {
    let f = g.f();
    let choices = |i: usize| -> Vec<Pair> {
        match w.map(|w| w.bits()[i]) {
            Some(1) => vec![Pair::BB],
            Some(_) => vec![Pair::AB, Pair::BA],
            None => Pair::ALL.to_vec(),
        }
    };
    let mut out = Vec::new();
    for start in choices(0) {
        // reach[i][c]: column i can carry c on some path from `start`.
        let mut reach = vec![[false; 3]; f];
        reach[0][start.index()] = true;
        for i in 1..f {
            for c in choices(i) {
                reach[i][c.index()] = Pair::ALL
                    .iter()
                    .any(|&q| reach[i - 1][q.index()] && column_transition_allowed(g, i as i64, q, c));
            }
        }
        // Backward enumeration of closed cycles.
        let mut stack: Vec<(usize, Vec<Pair>)> = Pair::ALL
            .iter()
            .filter(|&&c| {
                reach[f - 1][c.index()] && column_transition_allowed(g, 0, swap(c), start)
            })
            .map(|&c| (f - 1, vec![c]))
            .collect();
        while let Some((i, suffix)) = stack.pop() {
            if i == 0 {
                let mut cols = suffix;
                cols.reverse();
                out.push(cols);
                if first_only {
                    return out;
                }
                continue;
            }
            let next = *suffix.last().unwrap();
            for q in Pair::ALL {
                if reach[i - 1][q.index()] && column_transition_allowed(g, i as i64, q, next) {
                    let mut s = suffix.clone();
                    s.push(q);
                    stack.push((i - 1, s));
                }
            }
        }
    }
    out
}

/// All active enriched weights of a gene by the cyclic column program.
pub fn enumerate_enriched_cyclic(g: &Gene) -> BTreeSet<EnrichedWeight> {
    if !is_viable(g) {
        return BTreeSet::new();
    }
    enriched_cycles(g, None, false).iter().map(|c| EnrichedWeight::from_columns(c)).collect()
}

/// An active enriched weight above w, if any.
pub fn lift(g: &Gene, w: &CombinatorialWeight) -> Option<EnrichedWeight> {
    if w.len() != g.f() || !is_viable(g) {
        return None;
    }
    enriched_cycles(g, Some(w), true).first().map(|c| EnrichedWeight::from_columns(c))
}

fn fragment_base(fr: &Fragment, x: Pair) -> bool {
    let (t, b) = fr.columns()[0];
    let plain = |l: Letter| matches!(l, Letter::A | Letter::B);
    match x {
        Pair::BB => !(fr.len() == 1 && (plain(t) || plain(b))),
        Pair::AB => b != Letter::O,
        Pair::BA => t != Letter::O,
    }
}

fn fragment_enriched_preds(fr: &Fragment, i: usize, x: Pair) -> &'static [Pair] {
    let (t0, b0) = fr.columns()[i - 1];
    let (t1, b1) = fr.columns()[i];
    match x {
        Pair::BB if t0.similar(b0) => &[Pair::AB, Pair::BA],
        Pair::BB => &[Pair::BB],
        Pair::AB if t1.similar(t0) => &[Pair::AB],
        Pair::AB => &[Pair::BA, Pair::BB],
        Pair::BA if b1.similar(b0) => &[Pair::BA],
        Pair::BA => &[Pair::AB, Pair::BB],
    }
}

/// The fragmentary enriched weights of F by the column recursion.
pub fn fragment_enriched_weights(fr: &Fragment) -> Vec<FragmentaryEnrichedWeight> {
    let l = fr.len();
    let mut sets: Vec<[Vec<Vec<Pair>>; 3]> = Vec::with_capacity(l);
    sets.push(Pair::ALL.map(|x| if fragment_base(fr, x) { vec![vec![x]] } else { vec![] }));
    for i in 1..l {
        let layer = Pair::ALL.map(|x| {
            let mut out = Vec::new();
            for &y in fragment_enriched_preds(fr, i, x) {
                for w in &sets[i - 1][y.index()] {
                    let mut w = w.clone();
                    w.push(x);
                    out.push(w);
                }
            }
            out
        });
        sets.push(layer);
    }
    let (t, b) = fr.columns()[l - 1];
    let terminals: &[Pair] = if l > 1 && b == Letter::AB {
        &[Pair::BB, Pair::AB]
    } else if l > 1 && t == Letter::AB {
        &[Pair::BB, Pair::BA]
    } else {
        &[Pair::BB, Pair::AB, Pair::BA]
    };
    let mut out: Vec<FragmentaryEnrichedWeight> = terminals
        .iter()
        .flat_map(|x| sets[l - 1][x.index()].iter())
        .map(|cols| FragmentaryEnrichedWeight { pairs: cols.iter().map(|&c| pair_classes(c)).collect() })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Active enriched weights of the gene: per-fragment recursion for
/// nondegenerate genes, the cyclic program otherwise.
pub fn enumerate_enriched_gene(g: &Gene) -> BTreeSet<EnrichedWeight> {
    if !is_viable(g) {
        return BTreeSet::new();
    }
    if is_degenerate(g) {
        return enumerate_enriched_cyclic(g);
    }
    let f = g.f();
    let frs = fragments(g).expect("viable nondegenerate");
    let per: Vec<Vec<FragmentaryEnrichedWeight>> = frs.iter().map(fragment_enriched_weights).collect();
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; frs.len()];
    if per.iter().any(|v| v.is_empty()) {
        return out;
    }
    loop {
        let mut hat = vec![Class::B; 2 * f];
        for (k, fr) in frs.iter().enumerate() {
            let a = fr.anchor().unwrap();
            for (j, &(up, down)) in per[k][idx[k]].pairs.iter().enumerate() {
                hat[(a + j) % (2 * f)] = up;
                hat[(a + j + f) % (2 * f)] = down;
            }
        }
        out.insert(EnrichedWeight { hat });
        let mut k = 0;
        loop {
            if k == idx.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < per[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

pub fn enumerate_enriched(t: &CoherentTriple) -> BTreeSet<EnrichedWeight> {
    enumerate_enriched_gene(&gene_of_triple(t))
}

/// The enriched weight read off a {0,1}-mask through table (22).
pub fn enriched_of_mask(g: &Gene, chi: &NumericalMask) -> Option<EnrichedWeight> {
    let n = 2 * g.f() as i64;
    let mut hat = Vec::with_capacity(n as usize);
    for i in 0..n {
        let lam = g.get(i).class();
        hat.push(match chi.get(i) {
            1 => lam,
            0 => lam.other(),
            _ => return None,
        });
    }
    Some(EnrichedWeight { hat })
}

/// Enriched weights obtained by scanning all 2^(2f) masks.
pub fn enumerate_enriched_by_masks(t: &CoherentTriple) -> BTreeSet<EnrichedWeight> {
    let g = gene_of_triple(t);
    let v = v_as_sequence(t);
    let n = 2 * t.f();
    assert!(n < 40, "mask scan is exponential");
    (0u64..1 << n)
        .filter_map(|m| {
            let chi = NumericalMask { values: (0..n).map(|k| (m >> k & 1) as i64).collect() };
            if is_active(&mutate(&v, &chi, t.p()), t.p()) {
                enriched_of_mask(&g, &chi)
            } else {
                None
            }
        })
        .collect()
}

/// r and epsilon read off an active sequence.
pub fn rep_solution_of_sigma(sigma: &PeriodicIntSequence, p: u32) -> Option<(Vec<u8>, Vec<u32>)> {
    let f = sigma.f();
    let pi = p as i64;
    let mut eps = vec![0u8; f];
    let mut r = vec![0u32; f];
    for i in 0..f {
        let (x, y) = (sigma.get(i as i64), sigma.get((i + f) as i64));
        if !is_active_pair(x, y, p) {
            return None;
        }
        let v = if y == 0 {
            x - 1
        } else if y == pi {
            pi - 1 - x
        } else if x == 0 {
            y - 1
        } else {
            pi - 1 - y
        };
        r[f - 1 - i] = v as u32;
        eps[f - 1 - i] = (x >= y) as u8;
    }
    Some((eps, r))
}

/// The Serre weight attached to an active compatible sequence.
pub fn serre_of_sigma(t: &CoherentTriple, sigma: &PeriodicIntSequence) -> Result<SerreWeight> {
    let (eps, r) = rep_solution_of_sigma(sigma, t.p()).ok_or(Error::NonIntegralS)?;
    if !is_compatible(sigma, t) {
        return Err(Error::NonIntegralS);
    }
    let s = s_from_solution(t.p(), t.f(), &t.h().value(), &eps, &r)?;
    SerreWeight::new(t.p(), t.f(), s, r)
}

/// The active compatible sequence built from a common weight and its two
/// witnesses.
pub fn sigma_from_witnesses(p: u32, eps: &[u8], eps_prime: &[u8], r: &[u32]) -> PeriodicIntSequence {
    let f = r.len() as i64;
    let n = 2 * f;
    // Extension: eps_{i+f} = 1 - eps_i and eps' f-periodic, which is what
    // makes every pair (sigma_i, sigma_{i+f}) active.
    let e = |j: i64| {
        let j = j.rem_euclid(n);
        if j < f {
            eps[j as usize] as i64
        } else {
            1 - eps[(j - f) as usize] as i64
        }
    };
    let e2 = |j: i64| eps_prime[j.rem_euclid(f) as usize] as i64;
    let rr = |j: i64| r[j.rem_euclid(f) as usize] as i64;
    let p = p as i64;
    let values = (0..n)
        .map(|i| {
            let j = f - 1 - i;
            e(j) * (1 + rr(j)) + e2(j) * (p - 1 - rr(j))
        })
        .collect();
    PeriodicIntSequence { values }
}

/// Value of sum sigma_i p^(2f-1-i) as a signed integer.
pub fn sigma_value(sigma: &PeriodicIntSequence, p: u32) -> BigInt {
    let p = BigInt::from(p);
    sigma.values.iter().fold(BigInt::zero(), |acc, &x| acc * &p + BigInt::from(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triple::make_triple;

    fn tstar() -> CoherentTriple {
        let b = |n: u64| BigUint::from(n);
        make_triple(5, 7, &b(4865171564), &b(58923), &b(77258)).unwrap()
    }

    #[test]
    fn active_pairs() {
        assert!(is_active_pair(0, 5, 5));
        assert!(!is_active_pair(1, 1, 5));
        assert!(!is_active_pair(2, 3, 5));
        assert!(!is_active_pair(0, 6, 5));
    }

    #[test]
    fn mutation_group_law() {
        let v = v_as_sequence(&tstar());
        assert_eq!(mutate(&v, &NumericalMask::zero(7), 5), v);
        let chi = NumericalMask::new((0..14).map(|i| (i * 7 % 5) - 2).collect());
        assert_eq!(mutate(&mutate(&v, &chi, 5), &chi.neg(), 5), v);
        let mut e = vec![0; 14];
        e[0] = 1;
        let m = mutate(&v, &NumericalMask::new(e), 5);
        assert_eq!(m.values()[0], v.values()[0] - 1);
        assert_eq!(m.values()[1], v.values()[1] + 5);
        assert!(is_compatible(&m, &tstar()));
    }

    #[test]
    fn compatibility() {
        let t = tstar();
        let v = v_as_sequence(&t);
        assert!(is_compatible(&v, &t));
        let mut bumped = v.values().to_vec();
        bumped[3] += 1;
        assert!(!is_compatible(&PeriodicIntSequence::new(bumped), &t));
    }

    #[test]
    fn delta_identity() {
        for bits in 0..16u8 {
            let c = |k: u8| if bits >> k & 1 == 1 { Class::A } else { Class::B };
            let (x1, x2, y1, y2) = (c(0), c(1), c(2), c(3));
            let d = |u: u8| if u == 1 { Class::A } else { Class::B };
            assert_eq!(
                delta_letters(d(delta_letters(x1, x2)), d(delta_letters(y1, y2))),
                delta_letters(d(delta_letters(x1, y1)), d(delta_letters(x2, y2)))
            );
        }
        let all_b = EnrichedWeight::new(vec![Class::B; 6]);
        assert_eq!(delta(&all_b).bits(), &[1, 1, 1]);
        let split = EnrichedWeight::new(vec![Class::A, Class::A, Class::B, Class::B]);
        assert_eq!(delta(&split).bits(), &[0, 0]);
    }

    #[test]
    fn reference_enriched_weights() {
        let t = tstar();
        let set = enumerate_enriched(&t);
        assert_eq!(set, enumerate_enriched_by_masks(&t));
        assert_eq!(set, enumerate_enriched_cyclic(&gene_of_triple(&t)));
        let image: BTreeSet<_> = set.iter().map(delta).collect();
        assert_eq!(image.len(), 20);
    }
}
