//! Genes: validation, computation from triples, fragments, dominance and
//! sampling of triples with a prescribed gene.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::basep::{self, Modulus, Residue};
use crate::error::{Error, Result};
use crate::triple::{v_sequence, CoherentTriple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
    AB,
    O,
}

/// The two classes of the letter-class map: a = {A, AB}, b = {B, O}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    A,
    B,
}

impl Class {
    pub fn other(self) -> Class {
        match self {
            Class::A => Class::B,
            Class::B => Class::A,
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::A => "a",
            Class::B => "b",
        })
    }
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::B, Letter::AB, Letter::O];

    pub fn class(self) -> Class {
        match self {
            Letter::A | Letter::AB => Class::A,
            Letter::B | Letter::O => Class::B,
        }
    }

    /// X ~ Y iff both letters have the same class.
    pub fn similar(self, other: Letter) -> bool {
        self.class() == other.class()
    }

    /// Exchanges A and B (AB and O are fixed).
    pub fn flip(self) -> Letter {
        match self {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
            l => l,
        }
    }

    fn a_count(self) -> u32 {
        matches!(self, Letter::A | Letter::AB) as u32
    }

    fn b_count(self) -> u32 {
        matches!(self, Letter::B | Letter::AB) as u32
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::A => "A",
            Letter::B => "B",
            Letter::AB => "AB",
            Letter::O => "O",
        })
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Letter> {
        match s.trim() {
            "A" | "a" => Ok(Letter::A),
            "B" | "b" => Ok(Letter::B),
            "AB" | "ab" => Ok(Letter::AB),
            "O" | "o" | "0" => Ok(Letter::O),
            other => Err(Error::Parse(other.to_string())),
        }
    }
}

fn parse_row(s: &str) -> Result<Vec<Letter>> {
    s.split(',').map(str::parse).collect()
}

fn parse_rows(s: &str) -> Result<(Vec<Letter>, Vec<Letter>)> {
    let (top, bottom) = s.split_once('/').ok_or_else(|| Error::Parse(s.to_string()))?;
    let top = parse_row(top)?;
    let bottom = parse_row(bottom)?;
    if top.len() != bottom.len() {
        return Err(Error::Parse(s.to_string()));
    }
    Ok((top, bottom))
}

fn join(letters: impl Iterator<Item = Letter>) -> String {
    letters.map(|l| l.to_string()).collect::<Vec<_>>().join(",")
}

/// A 2f-periodic word X_0, ..., X_{2f-1}; column i is (X_i, X_{i+f}).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gene {
    letters: Vec<Letter>,
}

pub fn validate_gene(letters: &[Letter]) -> Result<Gene> {
    let n = letters.len();
    if n % 2 != 0 {
        return Err(Error::OddLength(n));
    }
    let f = n / 2;
    if f < 2 {
        return Err(Error::InvalidDegree(f));
    }
    let at = |i: usize| letters[i % n];
    for i in 0..n {
        if at(i) == Letter::AB && at(i + 1) != Letter::O {
            return Err(Error::ABNotFollowedByO(i));
        }
    }
    for i in 0..n {
        if at(i + 1) == Letter::O && !matches!(at(i), Letter::AB | Letter::O) {
            return Err(Error::OIllegallyPreceded((i + 1) % n));
        }
    }
    if !(0..n).any(|i| at(i) == Letter::O || at(i) != at(i + f)) {
        return Err(Error::ConditionThreeFails);
    }
    Ok(Gene { letters: letters.to_vec() })
}

impl Gene {
    pub fn from_rows(top: &[Letter], bottom: &[Letter]) -> Result<Gene> {
        if top.len() != bottom.len() {
            return Err(Error::Parse("rows of different lengths".into()));
        }
        let mut letters = top.to_vec();
        letters.extend_from_slice(bottom);
        validate_gene(&letters)
    }

    pub fn f(&self) -> usize {
        self.letters.len() / 2
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// X_i with 2f-periodic indexing.
    pub fn get(&self, i: i64) -> Letter {
        self.letters[i.rem_euclid(self.letters.len() as i64) as usize]
    }

    /// (X_i, X_{i+f}); for f <= i < 2f this is column i - f with rows swapped.
    pub fn column(&self, i: i64) -> (Letter, Letter) {
        (self.get(i), self.get(i + self.f() as i64))
    }

    pub fn top(&self) -> &[Letter] {
        &self.letters[..self.f()]
    }

    pub fn bottom(&self) -> &[Letter] {
        &self.letters[self.f()..]
    }

    pub fn is_viable(&self) -> bool {
        is_viable(self)
    }

    pub fn is_degenerate(&self) -> bool {
        is_degenerate(self)
    }

    /// Exchanges A and B everywhere.
    pub fn flip(&self) -> Gene {
        Gene { letters: self.letters.iter().map(|l| l.flip()).collect() }
    }

    /// Columns of a cut set: O-columns, in increasing order.
    pub fn o_columns(&self) -> Vec<usize> {
        (0..self.f())
            .filter(|&i| self.letters[i] == Letter::O || self.letters[i + self.f()] == Letter::O)
            .collect()
    }
}

impl fmt::Display for Gene {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}",
            join(self.top().iter().copied()),
            join(self.bottom().iter().copied())
        )
    }
}

impl FromStr for Gene {
    type Err = Error;

    fn from_str(s: &str) -> Result<Gene> {
        let (top, bottom) = parse_rows(s)?;
        Gene::from_rows(&top, &bottom)
    }
}

/// No column (O, O).
pub fn is_viable(g: &Gene) -> bool {
    (0..g.f()).all(|i| g.column(i as i64) != (Letter::O, Letter::O))
}

/// No letter O.
pub fn is_degenerate(g: &Gene) -> bool {
    !g.letters.contains(&Letter::O)
}

/// Linear-time gene computation from the v-digits.
pub fn gene_of_triple(t: &CoherentTriple) -> Gene {
    let v = v_sequence(t);
    let d = v.digits();
    let n = d.len();
    let letters = match d.iter().position(|&x| x >= 2) {
        None => d
            .iter()
            .map(|&x| if x == 0 { Letter::A } else { Letter::B })
            .collect(),
        Some(i0) => {
            let mut x = vec![Letter::O; n];
            for step in 1..n {
                let i = (i0 + n - step) % n;
                let next = x[(i + 1) % n];
                x[i] = letter_from_digit(d[i], next == Letter::O);
            }
            x
        }
    };
    Gene { letters }
}

fn letter_from_digit(v: u32, next_is_o: bool) -> Letter {
    match (v, next_is_o) {
        (0, true) => Letter::AB,
        (0, false) => Letter::A,
        (1, true) => Letter::O,
        (1, false) => Letter::B,
        _ => Letter::O,
    }
}

/// Quadratic reference computation: X_i = O iff the rotated v-value reaches
/// (q^2 - 1)/(p - 1); the other letters follow from v_i and X_{i+1}.
pub fn gene_of_triple_oracle(t: &CoherentTriple) -> Gene {
    let v = v_sequence(t);
    let n = v.digits().len();
    let p = t.p();
    let threshold = Modulus::q2m1(p, t.f()).unwrap().value() / BigUint::from(p - 1);
    let is_o: Vec<bool> = (0..n)
        .map(|i| {
            let mut acc = BigUint::from(0u32);
            for j in 0..n {
                acc = acc * p + v.get((i + j) as i64);
            }
            acc >= threshold
        })
        .collect();
    let letters = (0..n)
        .map(|i| {
            if is_o[i] {
                Letter::O
            } else {
                letter_from_digit(v.digits()[i], is_o[(i + 1) % n])
            }
        })
        .collect();
    Gene { letters }
}

/// Column-wise dominant letters (A or B).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DominanceVector {
    dom: Vec<Letter>,
}

impl DominanceVector {
    pub fn letters(&self) -> &[Letter] {
        &self.dom
    }

    pub fn get(&self, i: i64) -> Letter {
        self.dom[i.rem_euclid(self.dom.len() as i64) as usize]
    }
}

/// Strict majority of a column, if any (AB counts once for each side).
pub fn column_majority(top: Letter, bottom: Letter) -> Option<Letter> {
    let a = top.a_count() + bottom.a_count();
    let b = top.b_count() + bottom.b_count();
    match a.cmp(&b) {
        std::cmp::Ordering::Greater => Some(Letter::A),
        std::cmp::Ordering::Less => Some(Letter::B),
        std::cmp::Ordering::Equal => None,
    }
}

pub fn dominant_letters(g: &Gene) -> Result<DominanceVector> {
    if is_degenerate(g) {
        return Err(Error::DegenerateGene);
    }
    if !is_viable(g) {
        return Err(Error::NotViable);
    }
    let f = g.f();
    let maj: Vec<Option<Letter>> = (0..f)
        .map(|i| {
            let (x, y) = g.column(i as i64);
            column_majority(x, y)
        })
        .collect();
    if maj.iter().all(Option::is_none) {
        return Err(Error::CircularDominance);
    }
    let mut dom = vec![Letter::A; f];
    for i in 0..f {
        let mut j = i;
        dom[i] = loop {
            if let Some(l) = maj[j] {
                break l;
            }
            j = (j + 1) % f;
        };
    }
    Ok(DominanceVector { dom })
}

/// A maximal O-delimited slice of a gene, or a free-standing fragment.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fragment {
    cols: Vec<(Letter, Letter)>,
    anchor: Option<usize>,
}

impl Fragment {
    pub fn new(cols: Vec<(Letter, Letter)>) -> Result<Fragment> {
        let l = cols.len();
        if l == 0 {
            return Err(Error::InvalidFragment("empty".into()));
        }
        let (t0, b0) = cols[0];
        if (t0 == Letter::O) == (b0 == Letter::O) {
            return Err(Error::InvalidFragment("first column needs exactly one O".into()));
        }
        for (i, &(t, b)) in cols.iter().enumerate() {
            if i > 0 && (t == Letter::O || b == Letter::O) {
                return Err(Error::InvalidFragment(format!("O in column {i}")));
            }
            if i + 1 < l && (t == Letter::AB || b == Letter::AB) {
                return Err(Error::InvalidFragment(format!("AB in column {i}")));
            }
        }
        if l > 1 {
            let (t, b) = cols[l - 1];
            if (t == Letter::AB) == (b == Letter::AB) {
                return Err(Error::InvalidFragment("last column needs exactly one AB".into()));
            }
        }
        if l == 1 && t0 == Letter::AB && b0 == Letter::AB {
            return Err(Error::InvalidFragment("column (AB, AB)".into()));
        }
        Ok(Fragment { cols, anchor: None })
    }

    pub fn with_anchor(mut self, anchor: usize) -> Fragment {
        self.anchor = Some(anchor);
        self
    }

    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn anchor(&self) -> Option<usize> {
        self.anchor
    }

    pub fn columns(&self) -> &[(Letter, Letter)] {
        &self.cols
    }

    pub fn top(&self, i: usize) -> Letter {
        self.cols[i].0
    }

    pub fn bottom(&self, i: usize) -> Letter {
        self.cols[i].1
    }

    /// Exchanges A and B everywhere; the anchor is kept.
    pub fn flip(&self) -> Fragment {
        Fragment {
            cols: self.cols.iter().map(|&(t, b)| (t.flip(), b.flip())).collect(),
            anchor: self.anchor,
        }
    }

    /// Exchanges the two rows.
    pub fn swap_rows(&self) -> Fragment {
        Fragment {
            cols: self.cols.iter().map(|&(t, b)| (b, t)).collect(),
            anchor: self.anchor,
        }
    }

    pub fn without_anchor(&self) -> Fragment {
        Fragment { cols: self.cols.clone(), anchor: None }
    }

    /// Dominant letter of each column; ties defer to the next column and a
    /// tie in the last column (only possible for length one) stays `None`.
    pub fn dominance(&self) -> Vec<Option<Letter>> {
        let mut out = vec![None; self.len()];
        for i in (0..self.len()).rev() {
            let (t, b) = self.cols[i];
            out[i] = column_majority(t, b).or_else(|| out.get(i + 1).copied().flatten());
        }
        out
    }

    /// Every valid fragment of length `l`.
    pub fn all_of_length(l: usize) -> Vec<Fragment> {
        use Letter::*;
        if l == 0 {
            return Vec::new();
        }
        let firsts: Vec<(Letter, Letter)> = if l == 1 {
            [A, B, AB].iter().flat_map(|&x| [(O, x), (x, O)]).collect()
        } else {
            [A, B].iter().flat_map(|&x| [(O, x), (x, O)]).collect()
        };
        let plain = [(A, A), (A, B), (B, A), (B, B)];
        let lasts = [(AB, A), (AB, B), (A, AB), (B, AB)];
        let mut prefixes: Vec<Vec<(Letter, Letter)>> = firsts.into_iter().map(|c| vec![c]).collect();
        for i in 1..l {
            let options: &[(Letter, Letter)] = if i + 1 == l { &lasts } else { &plain };
            prefixes = prefixes
                .into_iter()
                .flat_map(|p| {
                    options.iter().map(move |&c| {
                        let mut p = p.clone();
                        p.push(c);
                        p
                    })
                })
                .collect();
        }
        let mut out: Vec<Fragment> = prefixes.into_iter().filter_map(|c| Fragment::new(c).ok()).collect();
        out.sort();
        out
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}",
            join(self.cols.iter().map(|c| c.0)),
            join(self.cols.iter().map(|c| c.1))
        )
    }
}

impl FromStr for Fragment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Fragment> {
        let (top, bottom) = parse_rows(s)?;
        Fragment::new(top.into_iter().zip(bottom).collect())
    }
}

/// Cuts a viable nondegenerate gene before each O-column.
pub fn fragments(g: &Gene) -> Result<Vec<Fragment>> {
    if is_degenerate(g) {
        return Err(Error::DegenerateGene);
    }
    if !is_viable(g) {
        return Err(Error::NotViable);
    }
    let f = g.f();
    let cuts = g.o_columns();
    let mut out = Vec::with_capacity(cuts.len());
    for (k, &c) in cuts.iter().enumerate() {
        let end = if k + 1 < cuts.len() { cuts[k + 1] } else { cuts[0] + f };
        let cols = (c..end).map(|j| g.column(j as i64)).collect();
        let fr = Fragment::new(cols).expect("cut of a valid viable gene is a fragment");
        out.push(fr.with_anchor(c));
    }
    Ok(out)
}

/// Draws a coherent triple with gene `g`, or `Failure`.
///
/// On success the triple is uniform among coherent triples with gene `g`.
pub fn sample_triple<R: Rng + ?Sized>(g: &Gene, p: u32, rng: &mut R) -> Result<CoherentTriple> {
    basep::check_params(p, g.f())?;
    if p == 3 {
        return Err(Error::UnsupportedPrime(p));
    }
    let n = g.letters.len();
    let f = g.f();
    let v: Vec<u32> = (0..n)
        .map(|i| match g.letters[i] {
            Letter::A | Letter::AB => 0,
            Letter::B => 1,
            Letter::O if g.get(i as i64 + 1) == Letter::O => rng.gen_range(1..p),
            Letter::O => rng.gen_range(2..p),
        })
        .collect();
    let gp: Vec<u32> = (0..f).map(|_| rng.gen_range(0..p)).collect();
    if gp.iter().all(|&d| d == p - 1) {
        return Err(Error::Failure);
    }
    if v[..f] == v[f..] {
        return Err(Error::Failure);
    }
    let m1 = Modulus::qm1(p, f)?;
    let gamma_prime = Residue::from_canonical_digits(gp, m1)?;
    CoherentTriple::from_v_and_gamma_prime(&v, gamma_prime)
}

/// [`sample_triple`] with a ChaCha8 generator seeded from `seed`, retrying up to
/// `retries` times after the first attempt.
pub fn sample_triple_seeded(g: &Gene, p: u32, seed: u64, retries: usize) -> Result<CoherentTriple> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = Error::Failure;
    for _ in 0..=retries {
        match sample_triple(g, p, &mut rng) {
            Err(Error::Failure) => last = Error::Failure,
            other => return other,
        }
    }
    Err(last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triple::make_triple;

    fn tstar_gene() -> Gene {
        "O,A,B,A,AB,O,A/B,A,AB,O,O,B,AB".parse().unwrap()
    }

    fn t(h: u64, g: u64, gp: u64) -> CoherentTriple {
        make_triple(5, 2, &h.into(), &g.into(), &gp.into()).unwrap()
    }

    #[test]
    fn validation_examples() {
        use Letter::*;
        let g = validate_gene(&[O, A, B, A, AB, O, A, B, A, AB, O, O, B, AB]).unwrap();
        assert_eq!(g.f(), 7);
        assert_eq!(g, tstar_gene());
        assert_eq!(validate_gene(&[AB, A, O, O]), Err(Error::ABNotFollowedByO(0)));
        assert_eq!(validate_gene(&[A, A, A, A]), Err(Error::ConditionThreeFails));
        assert_eq!(validate_gene(&[A, O, A, B]), Err(Error::OIllegallyPreceded(1)));
        assert_eq!(validate_gene(&[A, B, A]), Err(Error::OddLength(3)));
        let g = validate_gene(&[AB, O, AB, O]).unwrap();
        assert!(!g.is_viable());
        let g = validate_gene(&[B, A, A, A]).unwrap();
        assert!(g.is_viable() && g.is_degenerate());
        assert!(tstar_gene().is_viable() && !tstar_gene().is_degenerate());
    }

    #[test]
    fn genes_of_small_triples() {
        use Letter::*;
        let g = gene_of_triple(&t(25, 19, 0));
        assert_eq!(g.letters(), &[A, B, A, A]);
        assert_eq!(gene_of_triple_oracle(&t(25, 19, 0)), g);
        let g = gene_of_triple(&t(1, 19, 0));
        assert_eq!(g.letters(), &[A, A, A, B]);
        assert_eq!(gene_of_triple_oracle(&t(1, 19, 0)), g);
    }

    #[test]
    fn fragments_of_reference_gene() {
        let fr = fragments(&tstar_gene()).unwrap();
        let shown: Vec<String> = fr.iter().map(|f| f.to_string()).collect();
        assert_eq!(shown, ["O,A,B/B,A,AB", "A/O", "AB/O", "O,A/B,AB"]);
        let anchors: Vec<_> = fr.iter().map(|f| f.anchor().unwrap()).collect();
        assert_eq!(anchors, [0, 3, 4, 5]);
        let fib: Gene = "O,A,B,A,B,A,B,A,B/B,A,B,A,B,A,B,A,AB".parse().unwrap();
        assert_eq!(fragments(&fib).unwrap().len(), 1);
        let deg: Gene = "B,A/A,A".parse().unwrap();
        assert_eq!(fragments(&deg), Err(Error::DegenerateGene));
    }

    #[test]
    fn wrapped_fragment_swaps_rows() {
        // Cut at column 1 only; the fragment continues into column 0 read with
        // rows swapped.
        assert!("A,O,B/AB,B,AB".parse::<Gene>().is_err());
        let g: Gene = "AB,O,A/B,A,B".parse().unwrap();
        let fr = fragments(&g).unwrap();
        assert_eq!(fr.len(), 1);
        assert_eq!(fr[0].anchor(), Some(1));
        assert_eq!(fr[0].to_string(), "O,A,B/A,B,AB");
    }

    #[test]
    fn fragment_validation() {
        assert!("O/A".parse::<Fragment>().is_ok());
        assert!("O/AB".parse::<Fragment>().is_ok());
        assert!("A/A".parse::<Fragment>().is_err());
        assert!("O,A/B,B".parse::<Fragment>().is_err());
        assert!("O,AB,A/B,A,AB".parse::<Fragment>().is_err());
        assert_eq!(Fragment::all_of_length(1).len(), 6);
    }

    #[test]
    fn dominance_examples() {
        use Letter::*;
        assert_eq!(column_majority(A, A), Some(A));
        assert_eq!(column_majority(O, B), Some(B));
        assert_eq!(column_majority(A, AB), Some(A));
        assert_eq!(column_majority(A, B), None);
        let d = dominant_letters(&tstar_gene()).unwrap();
        assert_eq!(d.letters(), &[B, A, B, A, B, B, A]);
        let circ: Gene = "O,AB,O/AB,O,AB".parse().unwrap();
        assert!(circ.is_viable() && !circ.is_degenerate());
        assert_eq!(dominant_letters(&circ), Err(Error::CircularDominance));
    }

    #[test]
    fn sampler_round_trip_reference_gene() {
        let g = tstar_gene();
        let t = sample_triple_seeded(&g, 5, 7, 64).unwrap();
        assert_eq!(gene_of_triple(&t), g);
        let deg: Gene = "A,B/A,A".parse().unwrap();
        assert_eq!(sample_triple_seeded(&deg, 3, 1, 0), Err(Error::UnsupportedPrime(3)));
    }
}
