#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use serre_genes::gene::{validate_gene, Class, Gene, Letter};

/// Every valid gene of length 2f.
pub fn all_genes(f: usize) -> Vec<Gene> {
    let n = 2 * f;
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let word: Vec<Letter> = idx.iter().map(|&k| Letter::ALL[k]).collect();
        if let Ok(g) = validate_gene(&word) {
            out.push(g);
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            idx[k] += 1;
            if idx[k] < 4 {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Genes over {A, B} only.
pub fn degenerate_genes(f: usize) -> Vec<Gene> {
    let n = 2 * f;
    (0u64..1 << n)
        .filter_map(|m| {
            let word: Vec<Letter> = (0..n)
                .map(|k| if m >> k & 1 == 1 { Letter::B } else { Letter::A })
                .collect();
            validate_gene(&word).ok()
        })
        .collect()
}

/// Activity of an enriched weight, position by position, for a gene whose
/// letters are read 2f-periodically. `a[i]` is true for a, false for b.
pub fn enriched_active(g: &Gene, a: &[bool]) -> bool {
    let f = g.f() as i64;
    let n = 2 * f;
    let hat = |i: i64| a[i.rem_euclid(n) as usize];
    let lam = |i: i64| g.get(i).class() == Class::A;
    for i in 0..f {
        if hat(i) && hat(i + f) {
            return false;
        }
    }
    for i in 0..n {
        let x = g.get(i);
        let y = g.get(i + f);
        if x == Letter::O {
            if hat(i - 1) == lam(i - 1) || hat(i + f) {
                return false;
            }
            continue;
        }
        if y == Letter::O {
            continue;
        }
        let ok = match (hat(i), hat(i + f)) {
            (false, false) => {
                if lam(i - 1) == lam(i - 1 + f) {
                    hat(i - 1) != hat(i - 1 + f)
                } else {
                    hat(i - 1) == hat(i - 1 + f)
                }
            }
            (true, false) => hat(i - 1) == (lam(i) == lam(i - 1)),
            (false, true) => hat(i - 1 + f) == (lam(i + f) == lam(i - 1 + f)),
            (true, true) => false,
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Active enriched weights of a gene by exhaustive search.
pub fn brute_enriched(g: &Gene) -> Vec<Vec<bool>> {
    let n = 2 * g.f();
    (0u64..1 << n)
        .map(|m| (0..n).map(|k| m >> k & 1 == 1).collect::<Vec<bool>>())
        .filter(|a| enriched_active(g, a))
        .collect()
}

/// W(X) as the image of the active enriched weights.
pub fn brute_weights(g: &Gene) -> BTreeSet<Vec<u8>> {
    let f = g.f();
    brute_enriched(g)
        .into_iter()
        .map(|a| (0..f).map(|i| (a[i] == a[i + f]) as u8).collect())
        .collect()
}

/// Card W(X) for a degenerate gene, counting words by the set of
/// (first, current) pairs they reach.
pub fn degenerate_count_by_subsets(g: &Gene) -> u128 {
    // Pair indices: 0 = bb, 1 = ab, 2 = ba.
    let f = g.f() as i64;
    let bit = |x: usize| (x == 0) as u8;
    let preds = |i: i64, x: usize| -> Vec<usize> {
        let same_prev = g.get(i - 1) == g.get(i - 1 + f);
        let same_top = g.get(i) == g.get(i - 1);
        let same_bottom = g.get(i + f) == g.get(i - 1 + f);
        match x {
            0 if same_prev => vec![1, 2],
            0 => vec![0],
            1 if same_top => vec![1],
            1 => vec![2, 0],
            2 if same_bottom => vec![2],
            _ => vec![1, 0],
        }
    };
    let start: u16 = (0..3).map(|a| 1u16 << (a * 3 + a)).sum();
    let mut layer: HashMap<u16, u128> = HashMap::from([(start, 1)]);
    for i in 0..f {
        let mut next: HashMap<u16, u128> = HashMap::new();
        for (&set, &n) in &layer {
            for b in 0..2u8 {
                let mut out = 0u16;
                for first in 0..3 {
                    for target in 0..3 {
                        if bit(target) != b {
                            continue;
                        }
                        if preds(i, target).iter().any(|&y| set >> (first * 3 + y) & 1 == 1) {
                            out |= 1 << (first * 3 + target);
                        }
                    }
                }
                if out != 0 {
                    *next.entry(out).or_default() += n;
                }
            }
        }
        layer = next;
    }
    let terminal: u16 = (1 << 0) | (1 << (3 + 2)) | (1 << (6 + 1));
    layer
        .iter()
        .filter(|(&s, _)| s & terminal != 0)
        .map(|(_, &n)| n)
        .sum()
}

use num_bigint::BigUint;
use rand::Rng;
use serre_genes::triple::{make_triple, CoherentTriple};

pub fn q_of(p: u32, f: usize) -> u64 {
    (p as u64).pow(f as u32)
}

/// The triple (h, gamma, gamma') with gamma forced by coherence.
pub fn triple_of(p: u32, f: usize, h: u64, gamma_prime: u64) -> Option<CoherentTriple> {
    let q = q_of(p, f);
    let rep = (q - 1) / (p as u64 - 1);
    let gamma = ((h % (q - 1)) + 2 * (q - 1) - gamma_prime % (q - 1) - rep % (q - 1)) % (q - 1);
    make_triple(p, f, &BigUint::from(h), &BigUint::from(gamma), &BigUint::from(gamma_prime)).ok()
}

/// Every coherent triple for (p, f).
pub fn all_triples(p: u32, f: usize) -> Vec<CoherentTriple> {
    let q = q_of(p, f);
    let mut out = Vec::new();
    for h in 0..q * q - 1 {
        if h % (q + 1) == 0 {
            continue;
        }
        for gp in 0..q - 1 {
            out.push(triple_of(p, f, h, gp).expect("coherent by construction"));
        }
    }
    out
}

pub fn random_triple<R: Rng>(p: u32, f: usize, rng: &mut R) -> CoherentTriple {
    let q = q_of(p, f);
    loop {
        let h = rng.gen_range(0..q * q - 1);
        if h % (q + 1) == 0 {
            continue;
        }
        let gp = rng.gen_range(0..q - 1);
        return triple_of(p, f, h, gp).unwrap();
    }
}
