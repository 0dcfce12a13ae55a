mod common;

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serre_genes::enriched::*;
use serre_genes::gene::{gene_of_triple, is_viable, Class, Letter};
use serre_genes::serre::{common_weights_oracle, serre_of_combinatorial, weights_of_rep_witnessed, weights_of_type_witnessed, DEFAULT_CONVENTION};
use serre_genes::triple::CoherentTriple;
use serre_genes::weights::gene_contains;

use common::*;

/// One triple per v-value, with gamma' = 0. The enriched weights and masks
/// depend on v alone, so this covers every triple.
fn triples_by_v(p: u32, f: usize) -> Vec<CoherentTriple> {
    let q = q_of(p, f);
    (0..q * q - 1)
        .filter(|h| h % (q + 1) != 0)
        .map(|h| triple_of(p, f, h, 0).unwrap())
        .collect()
}

fn random_triples(n: usize, fs: std::ops::RangeInclusive<usize>, seed: u64) -> Vec<CoherentTriple> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fs: Vec<usize> = fs.collect();
    (0..n)
        .map(|k| {
            let p = [5, 7][k % 2];
            random_triple(p, fs[k % fs.len()], &mut rng)
        })
        .collect()
}

#[test]
fn masks_agree_with_enumeration() {
    for f in 2..=3 {
        for t in triples_by_v(5, f) {
            assert_eq!(enumerate_enriched(&t), enumerate_enriched_by_masks(&t), "h={}", t.h().value());
        }
    }
    for t in random_triples(100, 4..=6, 11) {
        assert_eq!(enumerate_enriched(&t), enumerate_enriched_by_masks(&t));
    }
}

#[test]
fn cyclic_program_agrees_with_fragments() {
    for f in 1..=4 {
        for g in all_genes(f) {
            assert_eq!(enumerate_enriched_gene(&g), enumerate_enriched_cyclic(&g), "gene {g}");
        }
    }
}

/// Integer masks with entries in [lo, hi] whose mutation of v is active,
/// found by depth-first search on chi_0, chi_1, ...
fn active_integer_masks(t: &CoherentTriple, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let v = v_as_sequence(t);
    let n = v.values().len();
    let p = t.p() as i64;
    let mut out = Vec::new();
    let mut chi = Vec::with_capacity(n);
    fn go(v: &PeriodicIntSequence, p: i64, lo: i64, hi: i64, chi: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let n = v.values().len();
        let i = chi.len();
        if i == n {
            let s0 = v.get(0) - chi[0] + p * chi[n - 1];
            if (0..=p).contains(&s0) {
                let m = mutate(v, &NumericalMask::new(chi.clone()), p as u32);
                if is_active(&m, p as u32) {
                    out.push(chi.clone());
                }
            }
            return;
        }
        for c in lo..=hi {
            if i > 0 && !(0..=p).contains(&(v.get(i as i64) - c + p * chi[i - 1])) {
                continue;
            }
            chi.push(c);
            go(v, p, lo, hi, chi, out);
            chi.pop();
        }
    }
    go(&v, p, lo, hi, &mut chi, &mut out);
    out
}

#[test]
fn integer_masks_are_binary() {
    let mut checked = 0;
    for f in 2..=3 {
        for t in triples_by_v(5, f) {
            for chi in active_integer_masks(&t, -2, 3) {
                assert!(chi.iter().all(|&c| c == 0 || c == 1), "{chi:?}");
                checked += 1;
            }
        }
    }
    for t in random_triples(300, 3..=5, 12) {
        for chi in active_integer_masks(&t, -2, 3) {
            assert!(chi.iter().all(|&c| c == 0 || c == 1), "{chi:?}");
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn divisibility_of_active_sequences() {
    for t in random_triples(500, 2..=6, 13).into_iter().chain(triples_by_v(5, 2)) {
        let g = gene_of_triple(&t);
        let p = t.p() as i64;
        for w in enumerate_enriched(&t) {
            let sigma = sigma_of(&t, &g, &w);
            assert!(is_active(&sigma, t.p()) && is_compatible(&sigma, &t));
            for i in 0..2 * t.f() as i64 {
                let s = sigma.get(i);
                if w.get(i) == Class::A {
                    assert!(s % p != 0, "gene {g} i={i} sigma={:?}", sigma.values());
                } else if g.get(i) != Letter::O {
                    assert!(s == 0 || s == p, "gene {g} i={i} sigma={:?}", sigma.values());
                }
            }
        }
    }
}

/// Every active sequence with entries in [0, p].
fn active_sequences(p: u32, f: usize) -> Vec<PeriodicIntSequence> {
    let pi = p as i64;
    let pairs: Vec<(i64, i64)> = (0..=pi)
        .flat_map(|x| (0..=pi).map(move |y| (x, y)))
        .filter(|&(x, y)| is_active_pair(x, y, p))
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; f];
    loop {
        let mut vals = vec![0i64; 2 * f];
        for i in 0..f {
            vals[i] = pairs[idx[i]].0;
            vals[i + f] = pairs[idx[i]].1;
        }
        out.push(PeriodicIntSequence::new(vals));
        let mut k = 0;
        loop {
            if k == f {
                return out;
            }
            idx[k] += 1;
            if idx[k] < pairs.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[test]
fn edge_values_avoid_o() {
    let seqs = active_sequences(5, 2);
    for t in triples_by_v(5, 2) {
        let g = gene_of_triple(&t);
        for s in seqs.iter().filter(|s| is_compatible(s, &t)) {
            for i in 0..4 {
                if s.get(i) == 0 || s.get(i) == 5 {
                    assert_ne!(g.get(i), Letter::O, "gene {g} sigma={:?}", s.values());
                }
            }
        }
    }
}

fn check_pointwise(t: &CoherentTriple) {
    let g = gene_of_triple(t);
    for w in enumerate_enriched(t) {
        let d = delta(&w);
        assert!(gene_contains(&g, &d));
        let direct = serre_of_sigma(t, &sigma_of(t, &g, &w)).unwrap();
        assert_eq!(direct, serre_of_combinatorial(t, &d).unwrap(), "gene {g} w={w}");
    }
}

#[test]
fn enriched_image_is_lift_independent() {
    for t in all_triples(5, 2) {
        check_pointwise(&t);
    }
    for t in random_triples(1000, 3..=6, 14) {
        check_pointwise(&t);
    }
}

#[test]
fn witnesses_give_active_sequences() {
    for t in random_triples(300, 2..=5, 15).into_iter().chain(all_triples(5, 2).into_iter().step_by(7)) {
        let g = gene_of_triple(&t);
        let (p, f) = (t.p(), t.f());
        let common = common_weights_oracle(&t);
        let rep = weights_of_rep_witnessed(p, f, &t.h().value()).unwrap();
        let ty = weights_of_type_witnessed(p, f, &t.gamma().value(), &t.gamma_prime().value(), DEFAULT_CONVENTION).unwrap();
        let enriched = enumerate_enriched(&t);
        let mut reached = BTreeSet::new();
        for a in rep.iter().filter(|a| common.contains(&a.weight)) {
            for b in ty.iter().filter(|b| b.weight == a.weight) {
                let eps = a.epsilon.as_ref().unwrap();
                let eps_prime = b.epsilon_prime.as_ref().unwrap();
                let sigma = sigma_from_witnesses(p, eps, eps_prime, a.weight.r());
                assert!(is_active(&sigma, p), "gene {g} {:?} h={} gp={} w={} eps={eps:?} epsp={eps_prime:?}", sigma.values(), t.h().value(), t.gamma_prime().value(), a.weight);
                assert!(is_compatible(&sigma, &t));
                assert_eq!(serre_of_sigma(&t, &sigma).unwrap(), a.weight);
                // The difference from v is a {0,1} mask, hence an enriched weight.
                let found = enriched.iter().find(|w| sigma_of(&t, &g, w) == sigma);
                assert!(found.is_some(), "gene {g}");
                reached.insert(a.weight.clone());
            }
        }
        assert_eq!(reached, common);
    }
}

#[test]
fn non_viable_genes_have_no_enriched_weights() {
    for f in 1..=4 {
        for g in all_genes(f).into_iter().filter(|g| !is_viable(g)) {
            assert!(enumerate_enriched_gene(&g).is_empty(), "gene {g}");
            assert!(enumerate_enriched_cyclic(&g).is_empty());
        }
    }
    let mut seen = 0;
    for t in triples_by_v(5, 2).into_iter().filter(|t| !is_viable(&gene_of_triple(t))) {
        assert!(enumerate_enriched_by_masks(&t).is_empty());
        assert!(common_weights_oracle(&t).is_empty());
        seen += 1;
    }
    assert!(seen > 0);
}
