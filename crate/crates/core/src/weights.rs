//! Combinatorial weights of fragments and genes: enumeration, streaming and
//! counting without enumeration.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::count::Count;
use crate::gene::{fragments, is_degenerate, is_viable, Fragment, Gene, Letter};

/// An f-periodic bit word w_0, ..., w_{f-1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CombinatorialWeight {
    bits: Vec<u8>,
}

impl CombinatorialWeight {
    pub fn new(bits: Vec<u8>) -> CombinatorialWeight {
        assert!(bits.iter().all(|&b| b <= 1), "bits must be 0 or 1");
        CombinatorialWeight { bits }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: i64) -> u8 {
        self.bits[i.rem_euclid(self.bits.len() as i64) as usize]
    }

    /// "0010001"
    pub fn compact(&self) -> String {
        self.bits.iter().map(|b| char::from(b'0' + b)).collect()
    }
}

impl fmt::Display for CombinatorialWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.bits.iter().map(|b| b.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The three column types (b,b), (a,b), (b,a), used as indices 0, 1, 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pair {
    BB,
    AB,
    BA,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::BB, Pair::AB, Pair::BA];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Last bit of every tuple in a set indexed by this pair.
    pub fn bit(self) -> u8 {
        (self == Pair::BB) as u8
    }
}

/// Predecessor pairs feeding W_i^target, given the fragment (or gene)
/// columns i-1 and i.
///
/// `same_prev` is X_{i-1}^up ~ X_{i-1}^down, `same_top` is X_i^up ~ X_{i-1}^up
/// and `same_bottom` is X_i^down ~ X_{i-1}^down.
fn predecessors(target: Pair, same_prev: bool, same_top: bool, same_bottom: bool) -> &'static [Pair] {
    match target {
        Pair::BB if same_prev => &[Pair::AB, Pair::BA],
        Pair::BB => &[Pair::BB],
        Pair::AB if same_top => &[Pair::AB],
        Pair::AB => &[Pair::BA, Pair::BB],
        Pair::BA if same_bottom => &[Pair::BA],
        Pair::BA => &[Pair::AB, Pair::BB],
    }
}

fn fragment_preds(fr: &Fragment, i: usize, target: Pair) -> &'static [Pair] {
    let (t0, b0) = fr.columns()[i - 1];
    let (t1, b1) = fr.columns()[i];
    predecessors(target, t0.similar(b0), t1.similar(t0), b1.similar(b0))
}

fn fragment_base(fr: &Fragment, x: Pair) -> bool {
    let (t, b) = fr.columns()[0];
    let ab = |l: Letter| matches!(l, Letter::A | Letter::B);
    match x {
        Pair::BB => !(fr.len() == 1 && (ab(t) || ab(b))),
        Pair::AB => b != Letter::O,
        Pair::BA => t != Letter::O,
    }
}

/// Pairs whose final sets make up W(F).
fn fragment_terminals(fr: &Fragment) -> &'static [Pair] {
    let (t, b) = fr.columns()[fr.len() - 1];
    if b == Letter::AB && fr.len() > 1 {
        &[Pair::BB, Pair::AB]
    } else if t == Letter::AB && fr.len() > 1 {
        &[Pair::BB, Pair::BA]
    } else {
        &[Pair::BB, Pair::AB, Pair::BA]
    }
}

/// The sets W_i^(b,b), W_i^(a,b), W_i^(b,a), materialized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FragmentTables {
    /// `sets[i][pair.index()]`
    pub sets: Vec<[BTreeSet<Vec<u8>>; 3]>,
}

impl FragmentTables {
    pub fn get(&self, i: usize, x: Pair) -> &BTreeSet<Vec<u8>> {
        &self.sets[i][x.index()]
    }
}

pub fn fragment_tables(fr: &Fragment) -> FragmentTables {
    let mut sets: Vec<[BTreeSet<Vec<u8>>; 3]> = Vec::with_capacity(fr.len());
    let base = Pair::ALL.map(|x| {
        let mut s = BTreeSet::new();
        if fragment_base(fr, x) {
            s.insert(vec![x.bit()]);
        }
        s
    });
    sets.push(base);
    for i in 1..fr.len() {
        let layer = Pair::ALL.map(|x| {
            let mut s = BTreeSet::new();
            for &y in fragment_preds(fr, i, x) {
                for w in &sets[i - 1][y.index()] {
                    let mut w = w.clone();
                    w.push(x.bit());
                    s.insert(w);
                }
            }
            s
        });
        sets.push(layer);
    }
    FragmentTables { sets }
}

/// W(F) as a sorted list of l-bit tuples.
pub fn fragment_weights(fr: &Fragment) -> Vec<Vec<u8>> {
    FragmentWeights::new(fr).collect::<BTreeSet<_>>().into_iter().collect()
}

/// Membership test for W(F) in O(l).
pub fn fragment_contains(fr: &Fragment, bits: &[u8]) -> bool {
    if bits.len() != fr.len() {
        return false;
    }
    let mut inside = Pair::ALL.map(|x| fragment_base(fr, x) && bits[0] == x.bit());
    for i in 1..fr.len() {
        inside = Pair::ALL.map(|x| {
            bits[i] == x.bit() && fragment_preds(fr, i, x).iter().any(|y| inside[y.index()])
        });
    }
    fragment_terminals(fr).iter().any(|x| inside[x.index()])
}

/// Counts (c_i^(b,b), c_i^(a,b), c_i^(b,a)) for every i.
pub fn fragment_count_layers<T: Count>(fr: &Fragment) -> Vec<[T; 3]> {
    let ind = |b: bool| if b { T::one() } else { T::zero() };
    let mut out = vec![Pair::ALL.map(|x| ind(fragment_base(fr, x)))];
    for i in 1..fr.len() {
        let prev = &out[i - 1];
        let (t0, b0) = fr.columns()[i - 1];
        let bb = if t0.similar(b0) {
            prev[1].clone().max(prev[2].clone())
        } else {
            prev[0].clone()
        };
        let step = |x: Pair| {
            let preds = fragment_preds(fr, i, x);
            preds
                .iter()
                .fold(T::zero(), |acc, y| acc + prev[y.index()].clone())
        };
        let layer = [bb, step(Pair::AB), step(Pair::BA)];
        debug_assert!(
            fr.len() < 2 || {
                let [bb, ab, ba] = &layer;
                ab.clone() <= ba.clone() + bb.clone() && ba.clone() <= ab.clone() + bb.clone()
            },
            "triangle inequality fails"
        );
        out.push(layer);
    }
    out
}

pub fn fragment_count_in<T: Count>(fr: &Fragment) -> T {
    let layers = fragment_count_layers::<T>(fr);
    let last = &layers[fr.len() - 1];
    if fr.len() == 1 {
        // {1}, {0}, {0}: the two last ones coincide when both present.
        let zero_part = if last[1].is_zero() { last[2].clone() } else { last[1].clone() };
        return last[0].clone() + zero_part;
    }
    fragment_terminals(fr)
        .iter()
        .fold(T::zero(), |acc, x| acc + last[x.index()].clone())
}

pub fn fragment_count(fr: &Fragment) -> BigUint {
    fragment_count_in::<BigUint>(fr)
}

/// Demand-driven enumeration of W(F): each weight is a path through the
/// predecessor graph, explored only along branches with a nonzero count.
pub struct FragmentWeights {
    /// Feasible choices per level, top level first.
    options: Vec<Vec<Pair>>,
    /// Children of (i, x) for i >= 1, in enumeration order, nonempty only.
    children: Vec<[Vec<Pair>; 3]>,
    /// Chosen pair at each level, with the index into its option list.
    stack: Vec<(Pair, usize)>,
    len: usize,
    started: bool,
    done: bool,
}

impl FragmentWeights {
    pub fn new(fr: &Fragment) -> FragmentWeights {
        let l = fr.len();
        let counts = fragment_count_layers::<BigUint>(fr);
        let nonzero = |i: usize, x: Pair| !counts[i][x.index()].is_zero();
        let mut children: Vec<[Vec<Pair>; 3]> = vec![Default::default(); l];
        for i in 1..l {
            for x in Pair::ALL {
                let preds = fragment_preds(fr, i, x);
                let chosen: Vec<Pair> = if x == Pair::BB && preds.len() == 2 {
                    // Nested union: the larger set contains the other one.
                    let (a, b) = (preds[0], preds[1]);
                    let pick = if counts[i - 1][a.index()] >= counts[i - 1][b.index()] { a } else { b };
                    vec![pick]
                } else {
                    preds.to_vec()
                };
                children[i][x.index()] = chosen.into_iter().filter(|&y| nonzero(i - 1, y)).collect();
            }
        }
        let mut roots: Vec<Pair> = fragment_terminals(fr)
            .iter()
            .copied()
            .filter(|&x| nonzero(l - 1, x))
            .collect();
        if l == 1 && roots.contains(&Pair::AB) && roots.contains(&Pair::BA) {
            roots.retain(|&x| x != Pair::BA);
        }
        let done = roots.is_empty();
        FragmentWeights {
            options: vec![roots],
            children,
            stack: Vec::with_capacity(l),
            len: l,
            started: false,
            done,
        }
    }

    fn descend(&mut self) {
        while self.stack.len() < self.len {
            let depth = self.stack.len();
            let opts = if depth == 0 {
                self.options[0].clone()
            } else {
                let level = self.len - depth;
                let (x, _) = self.stack[depth - 1];
                self.children[level][x.index()].clone()
            };
            if self.options.len() <= depth {
                self.options.push(opts);
            } else {
                self.options[depth] = opts;
            }
            let x = self.options[depth][0];
            self.stack.push((x, 0));
        }
    }

    fn current(&self) -> Vec<u8> {
        // stack[0] is level l-1.
        self.stack.iter().rev().map(|(x, _)| x.bit()).collect()
    }
}

impl Iterator for FragmentWeights {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.descend();
            return Some(self.current());
        }
        while let Some((_, idx)) = self.stack.pop() {
            let depth = self.stack.len();
            if idx + 1 < self.options[depth].len() {
                let x = self.options[depth][idx + 1];
                self.stack.push((x, idx + 1));
                self.descend();
                return Some(self.current());
            }
        }
        self.done = true;
        None
    }
}

/// Streams W(X): each new weight costs O(f) amortized.
pub struct GeneWeights {
    f: usize,
    inner: GeneWeightsInner,
}

enum GeneWeightsInner {
    Empty,
    Listed(std::vec::IntoIter<CombinatorialWeight>),
    Product {
        frags: Vec<Fragment>,
        iters: Vec<FragmentWeights>,
        current: Vec<Vec<u8>>,
        started: bool,
    },
}

impl GeneWeights {
    fn assemble(&self, frags: &[Fragment], current: &[Vec<u8>]) -> CombinatorialWeight {
        let mut bits = vec![0u8; self.f];
        for (fr, w) in frags.iter().zip(current) {
            let k = fr.anchor().unwrap_or(0);
            for (j, &b) in w.iter().enumerate() {
                bits[(k + j) % self.f] = b;
            }
        }
        CombinatorialWeight { bits }
    }
}

impl Iterator for GeneWeights {
    type Item = CombinatorialWeight;

    fn next(&mut self) -> Option<CombinatorialWeight> {
        let (frags, iters, current, started) = match &mut self.inner {
            GeneWeightsInner::Empty => return None,
            GeneWeightsInner::Listed(it) => return it.next(),
            GeneWeightsInner::Product { frags, iters, current, started } => {
                (frags, iters, current, started)
            }
        };
        if !*started {
            *started = true;
            for it in iters.iter_mut() {
                match it.next() {
                    Some(w) => current.push(w),
                    None => {
                        self.inner = GeneWeightsInner::Empty;
                        return None;
                    }
                }
            }
        } else {
            // Odometer: advance the last fragment, resetting exhausted ones.
            let mut k = iters.len();
            loop {
                if k == 0 {
                    self.inner = GeneWeightsInner::Empty;
                    return None;
                }
                k -= 1;
                if let Some(w) = iters[k].next() {
                    current[k] = w;
                    break;
                }
                iters[k] = FragmentWeights::new(&frags[k]);
                current[k] = iters[k].next().expect("nonempty fragment");
            }
        }
        let frags = frags.clone();
        let current = current.clone();
        Some(self.assemble(&frags, &current))
    }
}

pub fn stream_weights(g: &Gene) -> GeneWeights {
    let f = g.f();
    let inner = if !is_viable(g) {
        GeneWeightsInner::Empty
    } else if is_degenerate(g) {
        GeneWeightsInner::Listed(degenerate_weights(g).into_iter())
    } else {
        let frags = fragments(g).expect("viable nondegenerate");
        let iters = frags.iter().map(FragmentWeights::new).collect();
        GeneWeightsInner::Product { frags, iters, current: Vec::new(), started: false }
    };
    GeneWeights { f, inner }
}

/// W(X), sorted.
pub fn gene_weights(g: &Gene) -> Vec<CombinatorialWeight> {
    let mut out: Vec<_> = stream_weights(g).collect();
    out.sort();
    out.dedup();
    out
}

/// Membership of w in W(X).
pub fn gene_contains(g: &Gene, w: &CombinatorialWeight) -> bool {
    if w.len() != g.f() || !is_viable(g) {
        return false;
    }
    if is_degenerate(g) {
        return degenerate_contains(g, w.bits());
    }
    let f = g.f();
    fragments(g).unwrap().iter().all(|fr| {
        let k = fr.anchor().unwrap();
        let bits: Vec<u8> = (0..fr.len()).map(|j| w.bits[(k + j) % f]).collect();
        fragment_contains(fr, &bits)
    })
}

pub fn count_weights_in<T: Count>(g: &Gene) -> T {
    if !is_viable(g) {
        return T::zero();
    }
    if is_degenerate(g) {
        return degenerate_count_in::<T>(g);
    }
    fragments(g)
        .unwrap()
        .iter()
        .fold(T::one(), |acc, fr| acc * fragment_count_in::<T>(fr))
}

pub fn count_weights(g: &Gene) -> BigUint {
    count_weights_in::<BigUint>(g)
}

/// Fib_{l+2} with Fib_0 = 0, Fib_1 = 1.
pub fn fib_bound(l: usize) -> BigUint {
    fib(l + 2)
}

pub fn fib(n: usize) -> BigUint {
    let (mut a, mut b) = (BigUint::from(0u32), BigUint::from(1u32));
    for _ in 0..n {
        let c = &a + &b;
        a = b;
        b = c;
    }
    a
}

/// The alternating fragment O A B A ... with Fib_{l+2} weights (l >= 2).
pub fn extremal_fragment(l: usize, flipped: bool) -> Fragment {
    assert!(l >= 2, "extremal fragments have length at least 2");
    let mut cols = vec![(Letter::O, Letter::B)];
    for j in 1..l {
        let x = if j % 2 == 1 { Letter::A } else { Letter::B };
        cols.push((x, x));
    }
    let last = &mut cols[l - 1];
    if l % 2 == 0 {
        last.0 = Letter::AB;
    } else {
        last.1 = Letter::AB;
    }
    let fr = Fragment::new(cols).unwrap();
    if flipped {
        fr.flip()
    } else {
        fr
    }
}

/// The same alternating fragment with AB in the other row; it has
/// Fib_{l+2} - 1 weights.
pub fn near_extremal_fragment(l: usize) -> Fragment {
    let fr = extremal_fragment(l, false);
    let mut cols = fr.columns().to_vec();
    let last = &mut cols[l - 1];
    let plain = if last.0 == Letter::AB { last.1 } else { last.0 };
    *last = if l % 2 == 0 { (plain, Letter::AB) } else { (Letter::AB, plain) };
    Fragment::new(cols).unwrap()
}

// Degenerate genes.

fn degenerate_preds(g: &Gene, i: i64, target: Pair) -> &'static [Pair] {
    let f = g.f() as i64;
    // Only A and B occur, so letter equality and similarity agree.
    predecessors(
        target,
        g.get(i - 1) == g.get(i - 1 + f),
        g.get(i) == g.get(i - 1),
        g.get(i + f) == g.get(i - 1 + f),
    )
}

/// The nine sets W_i^{first, target} for -1 <= i < f.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerateTables {
    /// `sets[i + 1][first.index()][target.index()]`
    pub sets: Vec<[[BTreeSet<Vec<u8>>; 3]; 3]>,
}

impl DegenerateTables {
    pub fn get(&self, i: i64, first: Pair, target: Pair) -> &BTreeSet<Vec<u8>> {
        &self.sets[(i + 1) as usize][first.index()][target.index()]
    }
}

pub fn degenerate_tables(g: &Gene) -> DegenerateTables {
    debug_assert!(is_degenerate(g));
    let init = Pair::ALL.map(|a| {
        Pair::ALL.map(|b| {
            let mut s = BTreeSet::new();
            if a == b {
                s.insert(Vec::new());
            }
            s
        })
    });
    let mut sets = vec![init];
    for i in 0..g.f() as i64 {
        let prev = sets.last().unwrap();
        let layer = Pair::ALL.map(|first| {
            Pair::ALL.map(|target| {
                let mut s = BTreeSet::new();
                for &y in degenerate_preds(g, i, target) {
                    for w in &prev[first.index()][y.index()] {
                        let mut w = w.clone();
                        w.push(target.bit());
                        s.insert(w);
                    }
                }
                s
            })
        });
        sets.push(layer);
    }
    DegenerateTables { sets }
}

const DEGENERATE_TERMINALS: [(Pair, Pair); 3] =
    [(Pair::BB, Pair::BB), (Pair::AB, Pair::BA), (Pair::BA, Pair::AB)];

pub fn degenerate_weights(g: &Gene) -> Vec<CombinatorialWeight> {
    let t = degenerate_tables(g);
    let last = g.f() as i64 - 1;
    let mut all = BTreeSet::new();
    for (a, b) in DEGENERATE_TERMINALS {
        all.extend(t.get(last, a, b).iter().cloned());
    }
    all.into_iter().map(|bits| CombinatorialWeight { bits }).collect()
}

fn degenerate_contains(g: &Gene, bits: &[u8]) -> bool {
    DEGENERATE_TERMINALS.iter().any(|&(first, last)| {
        let mut inside = Pair::ALL.map(|x| x == first);
        for (i, &b) in bits.iter().enumerate() {
            inside = Pair::ALL.map(|x| {
                b == x.bit()
                    && degenerate_preds(g, i as i64, x).iter().any(|y| inside[y.index()])
            });
        }
        inside[last.index()]
    })
}

/// The fourteen counting sequences of a degenerate gene at one index.
///
/// `c[first][target]` are the nine plain cardinalities; `u[p][q]` is
/// Card(W^{(a,b),P} u W^{(b,a),Q}) for P, Q in {(a,b), (b,a)} (index 0 for
/// (a,b)); `u_bb` is Card(W^{(a,b),(b,b)} u W^{(b,a),(b,b)}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerateCounts<T> {
    pub c: [[T; 3]; 3],
    pub u: [[T; 2]; 2],
    pub u_bb: T,
}

fn pair_of_u(k: usize) -> Pair {
    if k == 0 {
        Pair::AB
    } else {
        Pair::BA
    }
}

fn u_of_pair(x: Pair) -> usize {
    match x {
        Pair::AB => 0,
        Pair::BA => 1,
        Pair::BB => unreachable!("bb sets are split off"),
    }
}

/// The layers i = 0, ..., f-1 of the fourteen sequences.
pub fn degenerate_count_layers<T: Count>(g: &Gene) -> Vec<DegenerateCounts<T>> {
    let f = g.f() as i64;
    let ind = |b: bool| if b { T::one() } else { T::zero() };
    // Index 0 from the explicit sets of length one.
    let first = {
        let t0 = |first: Pair, target: Pair| -> BTreeSet<u8> {
            degenerate_preds(g, 0, target)
                .iter()
                .filter(|&&y| y == first)
                .map(|_| target.bit())
                .collect()
        };
        let c = Pair::ALL.map(|a| Pair::ALL.map(|b| ind(!t0(a, b).is_empty())));
        let union = |x: BTreeSet<u8>, y: BTreeSet<u8>| x.union(&y).count();
        let from = |n: usize| (0..n).fold(T::zero(), |acc, _| acc + T::one());
        let u = [0, 1].map(|p| {
            [0, 1].map(|q| from(union(t0(Pair::AB, pair_of_u(p)), t0(Pair::BA, pair_of_u(q)))))
        });
        let u_bb = from(union(t0(Pair::AB, Pair::BB), t0(Pair::BA, Pair::BB)));
        DegenerateCounts { c, u, u_bb }
    };
    let mut out = vec![first];
    for i in 1..f {
        let prev = out.last().unwrap();
        let same_prev = g.get(i - 1) == g.get(i - 1 + f);
        let c = Pair::ALL.map(|a| {
            Pair::ALL.map(|b| {
                let preds = degenerate_preds(g, i, b);
                let row = &prev.c[a.index()];
                if b == Pair::BB && same_prev {
                    row[1].clone().max(row[2].clone())
                } else {
                    preds.iter().fold(T::zero(), |acc, y| acc + row[y.index()].clone())
                }
            })
        });
        let u = [0, 1].map(|p| {
            [0, 1].map(|q| {
                let pp = degenerate_preds(g, i, pair_of_u(p));
                let pq = degenerate_preds(g, i, pair_of_u(q));
                let bb_p = pp.contains(&Pair::BB);
                let bb_q = pq.contains(&Pair::BB);
                let ones = match (bb_p, bb_q) {
                    (true, true) => prev.u_bb.clone(),
                    (true, false) => prev.c[Pair::AB.index()][Pair::BB.index()].clone(),
                    (false, true) => prev.c[Pair::BA.index()][Pair::BB.index()].clone(),
                    (false, false) => T::zero(),
                };
                let yp = *pp.iter().find(|&&y| y != Pair::BB).unwrap();
                let yq = *pq.iter().find(|&&y| y != Pair::BB).unwrap();
                ones + prev.u[u_of_pair(yp)][u_of_pair(yq)].clone()
            })
        });
        let u_bb = if same_prev {
            prev.u
                .iter()
                .flatten()
                .cloned()
                .max()
                .unwrap()
        } else {
            prev.u_bb.clone()
        };
        out.push(DegenerateCounts { c, u, u_bb });
    }
    out
}

pub fn degenerate_count_in<T: Count>(g: &Gene) -> T {
    let layers = degenerate_count_layers::<T>(g);
    let last = layers.last().unwrap();
    last.c[Pair::BB.index()][Pair::BB.index()].clone()
        + last.u[u_of_pair(Pair::BA)][u_of_pair(Pair::AB)].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frag(s: &str) -> Fragment {
        s.parse().unwrap()
    }

    fn bits(ws: &[&str]) -> Vec<Vec<u8>> {
        let mut v: Vec<Vec<u8>> = ws
            .iter()
            .map(|w| w.bytes().map(|b| b - b'0').collect())
            .collect();
        v.sort();
        v
    }

    #[test]
    fn reference_fragments() {
        assert_eq!(
            fragment_weights(&frag("O,A,B/B,A,AB")),
            bits(&["001", "101", "000", "100", "010"])
        );
        assert_eq!(fragment_weights(&frag("A/O")), bits(&["0"]));
        assert_eq!(fragment_weights(&frag("AB/O")), bits(&["0", "1"]));
        assert_eq!(fragment_weights(&frag("O,A/B,AB")), bits(&["01", "10"]));
    }

    #[test]
    fn reference_tables() {
        let t = fragment_tables(&frag("O,A,B/B,A,AB"));
        assert_eq!(t.get(1, Pair::BA).iter().cloned().collect::<Vec<_>>(), bits(&["00", "10"]));
        assert_eq!(t.get(2, Pair::AB).len(), 3);
        assert_eq!(t.get(2, Pair::BA).iter().cloned().collect::<Vec<_>>(), bits(&["000", "100"]));
    }

    #[test]
    fn length_one_counts() {
        let counts: Vec<u64> = ["A/O", "O/A", "B/O", "O/B", "AB/O", "O/AB"]
            .iter()
            .map(|s| fragment_count_in::<u64>(&frag(s)))
            .collect();
        assert_eq!(counts, [1, 1, 1, 1, 2, 2]);
    }

    #[test]
    fn reference_gene() {
        let g: Gene = "O,A,B,A,AB,O,A/B,A,AB,O,O,B,AB".parse().unwrap();
        let w: Vec<String> = gene_weights(&g).iter().map(|w| w.compact()).collect();
        let mut expected = vec![
            "0010001", "0010010", "0010101", "0010110", "1010001", "1010010", "1010101",
            "1010110", "0000001", "0000010", "0000101", "0000110", "1000001", "1000010",
            "1000101", "1000110", "0100001", "0100010", "0100101", "0100110",
        ];
        expected.sort();
        assert_eq!(w, expected);
        assert_eq!(count_weights(&g), BigUint::from(20u32));
        assert_eq!(count_weights_in::<u32>(&g), 20);
    }

    #[test]
    fn fibonacci_examples() {
        assert_eq!(fib_bound(10), BigUint::from(144u32));
        assert_eq!(fib_bound(9), BigUint::from(89u32));
        assert_eq!(fib_bound(2), BigUint::from(3u32));
        let fr = extremal_fragment(9, false);
        assert_eq!(fr.to_string(), "O,A,B,A,B,A,B,A,B/B,A,B,A,B,A,B,A,AB");
        for l in 2..=12 {
            for flipped in [false, true] {
                let fr = extremal_fragment(l, flipped);
                assert_eq!(fragment_weights(&fr).len() as u64, fib(l + 2).to_u64_digits()[0]);
            }
            assert_eq!(fragment_count(&near_extremal_fragment(l)), fib(l + 2) - 1u32);
        }
    }

    #[test]
    fn degenerate_examples() {
        let g: Gene = "B,A/A,A".parse().unwrap();
        let w: Vec<String> = gene_weights(&g).iter().map(|w| w.compact()).collect();
        assert_eq!(w, ["00", "10"]);
        assert_eq!(count_weights_in::<u32>(&g), 2);
        let g: Gene = "B,B,B,A/A,B,A,A".parse().unwrap();
        let w: Vec<String> = gene_weights(&g).iter().map(|w| w.compact()).collect();
        assert_eq!(w, ["0000", "0010", "0011", "1010", "1100"]);
        assert_eq!(count_weights_in::<u32>(&g), 5);
    }

    #[test]
    fn figure_two_tables() {
        let g: Gene = "B,A/A,A".parse().unwrap();
        let t = degenerate_tables(&g);
        let show = |i: i64, a: Pair, b: Pair| -> Vec<String> {
            t.get(i, a, b)
                .iter()
                .map(|w| w.iter().map(|x| char::from(b'0' + x)).collect())
                .collect()
        };
        use Pair::*;
        for a in Pair::ALL {
            for b in Pair::ALL {
                assert_eq!(show(-1, a, b).len(), (a == b) as usize);
            }
        }
        let row0 = [
            [vec![], vec!["0"], vec![]],
            [vec!["1"], vec![], vec![]],
            [vec!["1"], vec!["0"], vec!["0"]],
        ];
        let row1 = [
            [vec![], vec![], vec![]],
            [vec!["11"], vec!["10"], vec![]],
            [vec!["11"], vec!["00", "10"], vec!["00"]],
        ];
        for (ai, a) in [BB, AB, BA].into_iter().enumerate() {
            for (bi, b) in [BB, AB, BA].into_iter().enumerate() {
                assert_eq!(show(0, a, b), row0[ai][bi]);
                assert_eq!(show(1, a, b), row1[ai][bi]);
            }
        }
    }

    #[test]
    fn streaming_matches_sets() {
        let g: Gene = "O,A,B,A,B,A,B,A,B/B,A,B,A,B,A,B,A,AB".parse().unwrap();
        let streamed: Vec<_> = stream_weights(&g).collect();
        assert_eq!(streamed.len(), 89);
        assert_eq!(count_weights(&g), BigUint::from(89u32));
        let set: BTreeSet<_> = streamed.iter().cloned().collect();
        assert_eq!(set.len(), 89);
        assert!(streamed.iter().all(|w| gene_contains(&g, w)));
    }

    #[test]
    fn non_viable_is_empty() {
        let g: Gene = "AB,O/AB,O".parse().unwrap();
        assert!(gene_weights(&g).is_empty());
        assert_eq!(count_weights(&g), BigUint::from(0u32));
    }
}
