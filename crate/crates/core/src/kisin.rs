//! Combinatorial presentations of Kisin varieties: constants and bilinear
//! equations in (P^1)^n, fragment reduction, crosses and the decomposition
//! of a gene into factor varieties.

use std::fmt;

use crate::error::{Error, Result};
use crate::gene::{dominant_letters, fragments, is_degenerate, is_viable, Fragment, Gene, Letter};

/// The value forced on the coordinates of one factor, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constant {
    Free,
    /// [0:1], i.e. the top coordinate vanishes.
    ZeroOne,
    /// [1:0], i.e. the bottom coordinate vanishes.
    OneZero,
}

/// lambda x_i y_{i+1} = mu y_i x_{i+1}, where [x_j : y_j] are the
/// coordinates on factor j. On genes y_j is x_{j+f}; the wrap-around
/// equation of a cyclic presentation reads lambda x_{n-1} x_0 = mu y_{n-1} y_0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Equation {
    pub i: usize,
    pub lambda: u8,
    pub mu: u8,
}

/// Values I < II of a shape function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    I,
    II,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KisinPresentation {
    pub n: usize,
    pub cyclic: bool,
    pub constants: Vec<Constant>,
    pub equations: Vec<Equation>,
    /// Never populated: shape functions are carried as a type only.
    pub shape: Option<Vec<Shape>>,
}

fn bit(b: bool) -> u8 {
    b as u8
}

/// Presentation of the Kisin variety of a viable nondegenerate gene.
///
/// When every column ties (each column then holds an O) there is no
/// dominance vector, but also no equation to write.
pub fn presentation_of_gene(g: &Gene) -> Result<KisinPresentation> {
    if is_degenerate(g) {
        return Err(Error::DegenerateGene);
    }
    if !is_viable(g) {
        return Err(Error::NotViable);
    }
    let f = g.f();
    let constants = (0..f)
        .map(|i| match g.column(i as i64) {
            (Letter::O, _) => Constant::ZeroOne,
            (_, Letter::O) => Constant::OneZero,
            _ => Constant::Free,
        })
        .collect();
    let mut equations = Vec::new();
    match dominant_letters(g) {
        Ok(dom) => {
            for i in 0..f {
                let d = dom.get(i as i64);
                if d != dom.get(i as i64 + 1) {
                    continue;
                }
                let (x, y) = g.column(i as i64);
                equations.push(Equation { i, lambda: bit(x == d), mu: bit(y == d) });
            }
        }
        Err(Error::CircularDominance) => {}
        Err(e) => return Err(e),
    }
    Ok(KisinPresentation { n: f, cyclic: true, constants, equations, shape: None })
}

/// Presentation of the Kisin variety of a fragment (linear, no wrap).
pub fn presentation_of_fragment(fr: &Fragment) -> KisinPresentation {
    let l = fr.len();
    let mut constants = vec![Constant::Free; l];
    constants[0] = match fr.columns()[0] {
        (Letter::O, _) => Constant::ZeroOne,
        _ => Constant::OneZero,
    };
    let dom = fr.dominance();
    let mut equations = Vec::new();
    for i in 0..l.saturating_sub(1) {
        let (Some(d), Some(e)) = (dom[i], dom[i + 1]) else { continue };
        if d != e {
            continue;
        }
        let (x, y) = fr.columns()[i];
        equations.push(Equation { i, lambda: bit(x == d), mu: bit(y == d) });
    }
    KisinPresentation { n: l, cyclic: false, constants, equations, shape: None }
}

impl KisinPresentation {
    /// Columns [start, start + len) of a linear presentation, with the
    /// first column marked by `head`.
    pub fn slice(&self, start: usize, len: usize, head: Constant) -> KisinPresentation {
        let mut constants = self.constants[start..start + len].to_vec();
        constants[0] = head;
        let equations = self
            .equations
            .iter()
            .filter(|e| e.i >= start && e.i + 1 < start + len && e.i + 1 < self.n)
            .map(|e| Equation { i: e.i - start, ..*e })
            .collect();
        KisinPresentation { n: len, cyclic: false, constants, equations, shape: None }
    }

    /// Points over F_q (q prime), each factor a point of P^1 encoded as
    /// 0 = [0:1] and 1 + a = [1:a].
    pub fn points(&self, q: u32) -> Vec<Vec<u8>> {
        assert!(q >= 2 && q < 128, "small prime fields only");
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(self.n);
        self.extend_points(q, &mut cur, &mut out);
        out
    }

    fn extend_points(&self, q: u32, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        let j = cur.len();
        if j == self.n {
            if !self.cyclic || self.wrap_holds(q, cur) {
                out.push(cur.clone());
            }
            return;
        }
        for pt in 0..=q as u8 {
            let (x, y) = coords(pt);
            let ok_const = match self.constants[j] {
                Constant::Free => true,
                Constant::ZeroOne => x == 0,
                Constant::OneZero => y == 0,
            };
            if !ok_const {
                continue;
            }
            if j > 0 {
                if let Some(e) = self.equations.iter().find(|e| e.i == j - 1) {
                    let (x0, y0) = coords(cur[j - 1]);
                    let lhs = e.lambda as u32 * x0 * y;
                    let rhs = e.mu as u32 * y0 * x;
                    if lhs % q != rhs % q {
                        continue;
                    }
                }
            }
            cur.push(pt);
            self.extend_points(q, cur, out);
            cur.pop();
        }
    }

    fn wrap_holds(&self, q: u32, cur: &[u8]) -> bool {
        let Some(e) = self.equations.iter().find(|e| e.i + 1 == self.n) else { return true };
        let (xl, yl) = coords(cur[self.n - 1]);
        let (x0, y0) = coords(cur[0]);
        (e.lambda as u32 * xl * x0) % q == (e.mu as u32 * yl * y0) % q
    }

    /// Factors on which the projection is constant, from the F_q points.
    pub fn constant_factors(&self, q: u32) -> Vec<usize> {
        let pts = self.points(q);
        (0..self.n)
            .filter(|&j| pts.iter().all(|p| p[j] == pts[0][j]))
            .collect()
    }

    /// Text form: one line per constant, then one per equation.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

fn coords(pt: u8) -> (u32, u32) {
    if pt == 0 {
        (0, 1)
    } else {
        (1, pt as u32 - 1)
    }
}

impl fmt::Display for KisinPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n;
        let mut lines = Vec::new();
        if self.cyclic {
            let x = |k: usize| format!("x_{}", k % (2 * n));
            for (i, c) in self.constants.iter().enumerate() {
                match c {
                    Constant::ZeroOne => lines.push(format!("{} = 0", x(i))),
                    Constant::OneZero => lines.push(format!("{} = 0", x(i + n))),
                    Constant::Free => {}
                }
            }
            for e in &self.equations {
                let i = e.i;
                lines.push(format!(
                    "{}·{}·{} = {}·{}·{}",
                    e.lambda,
                    x(i),
                    x(i + 1 + n),
                    e.mu,
                    x(i + n),
                    x(i + 1)
                ));
            }
        } else {
            for (i, c) in self.constants.iter().enumerate() {
                match c {
                    Constant::ZeroOne => lines.push(format!("x_{i} = 0")),
                    Constant::OneZero => lines.push(format!("y_{i} = 0")),
                    Constant::Free => {}
                }
            }
            for e in &self.equations {
                let i = e.i;
                lines.push(format!("{}·x_{i}·y_{} = {}·y_{i}·x_{}", e.lambda, i + 1, e.mu, i + 1));
            }
        }
        write!(f, "{}", lines.join("\n"))
    }
}

/// Which clause of the reducedness definition a top-reduced fragment meets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReducedCase {
    /// Length one.
    Single,
    /// B dominant at position 1.
    DominantB,
    /// Second column (A, B) followed by A dominant at position 2.
    Prefixed,
}

/// The reducedness clause met by `fr` read top-reduced, if any.
pub fn top_reduced_case(fr: &Fragment) -> Option<ReducedCase> {
    let (t0, b0) = fr.columns()[0];
    if t0 != Letter::O || !matches!(b0, Letter::A | Letter::AB) {
        return None;
    }
    let l = fr.len();
    if l == 1 {
        return Some(ReducedCase::Single);
    }
    let dom = fr.dominance();
    if dom[1] == Some(Letter::B) {
        return Some(ReducedCase::DominantB);
    }
    if l > 2 && fr.columns()[1] == (Letter::A, Letter::B) && dom[2] == Some(Letter::A) {
        return Some(ReducedCase::Prefixed);
    }
    None
}

pub fn is_top_reduced(fr: &Fragment) -> bool {
    top_reduced_case(fr).is_some()
}

pub fn is_bottom_reduced(fr: &Fragment) -> bool {
    is_top_reduced(&fr.swap_rows())
}

pub fn is_reduced(fr: &Fragment) -> bool {
    is_top_reduced(fr) || is_bottom_reduced(fr)
}

/// GR(F) = {[0:1]}^n x GR(reduced), with `reduced`
/// top-reduced; `rows_swapped` and `letters_flipped` record how the input
/// was normalized first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReductionResult {
    pub n: usize,
    pub reduced: Fragment,
    pub case: ReducedCase,
    pub rows_swapped: bool,
    pub letters_flipped: bool,
}

/// The largest n with F_i (bottom) = A for i < n-1 and A dominant at every
/// i < n, for F = (O, A) at column 0. The projections of index < n are
/// constant, the others surjective.
pub fn constant_prefix(fr: &Fragment) -> usize {
    let dom = fr.dominance();
    let l = fr.len();
    let mut n = 0;
    while n < l && dom[n] == Some(Letter::A) && (n == 0 || fr.bottom(n - 1) == Letter::A) {
        n += 1;
    }
    n
}

pub fn reduce(fr: &Fragment) -> ReductionResult {
    let mut f = fr.without_anchor();
    let rows_swapped = f.top(0) != Letter::O;
    if rows_swapped {
        f = f.swap_rows();
    }
    let letters_flipped = f.bottom(0) == Letter::B;
    if letters_flipped {
        f = f.flip();
    }
    let done = |n, reduced: Fragment| {
        let case = top_reduced_case(&reduced).expect("reduction ends on a top-reduced fragment");
        ReductionResult { n, reduced, case, rows_swapped, letters_flipped }
    };
    if f.len() == 1 {
        return done(0, f);
    }
    let n = constant_prefix(&f);
    if n == f.len() {
        // Everything is constant; the AB of the last column survives.
        let last = if f.bottom(n - 1) == Letter::AB { Letter::AB } else { Letter::A };
        let reduced = Fragment::new(vec![(Letter::O, last)]).expect("length one fragment");
        return done(n - 1, reduced);
    }
    let prefixed = f.bottom(n - 1) == Letter::B;
    let mut cols = vec![(Letter::O, Letter::A)];
    if prefixed {
        cols.push((Letter::A, Letter::B));
    }
    cols.extend_from_slice(&f.columns()[n..]);
    let reduced = Fragment::new(cols).expect("reduced columns form a fragment");
    // The (A, B) column of the prefixed form is itself constant.
    done(n - 1 - prefixed as usize, reduced)
}

/// Positions i < l-1 with F_i (top) = F_i (bottom) = Dom_{i+1}(F).
pub fn crosses(fr: &Fragment) -> Vec<usize> {
    let dom = fr.dominance();
    (0..fr.len().saturating_sub(1))
        .filter(|&i| {
            let (t, b) = fr.columns()[i];
            t == b && Some(t) == dom[i + 1]
        })
        .collect()
}

/// F with column i removed, i a cross.
pub fn delete_cross(fr: &Fragment, i: usize) -> Result<Fragment> {
    if !crosses(fr).contains(&i) {
        return Err(Error::NotACross(i));
    }
    let mut cols = fr.columns().to_vec();
    cols.remove(i);
    Fragment::new(cols)
}

/// w with a 0 inserted at position i.
pub fn insert_zero(w: &[u8], i: usize) -> Vec<u8> {
    let mut out = w.to_vec();
    out.insert(i, 0);
    out
}

/// Whether the AB of the last column sits in the top row, for a top-reduced
/// fragment; None when the last column has no AB.
pub fn ab_row(fr: &Fragment) -> Option<bool> {
    match fr.columns()[fr.len() - 1] {
        (Letter::AB, _) => Some(true),
        (_, Letter::AB) => Some(false),
        _ => None,
    }
}

/// A factor of the canonical decomposition of a gene's Kisin variety.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Component {
    /// First gene column of the factor.
    pub start: usize,
    pub len: usize,
    /// Equations of the gene restricted to the factor; the first column is
    /// the constant one.
    pub presentation: KisinPresentation,
    /// The reducedness clause of the factor, None for a prefix point.
    pub case: Option<ReducedCase>,
    /// Row of the AB in the last column of the reduced fragment (true for
    /// the row of its O), None without AB. Presentations do not see it.
    pub ab_top: Option<bool>,
}

/// The factors V_0, ..., V_{r-1} of GR(X), in gene order starting at the
/// first O-column.
pub fn decompose(g: &Gene) -> Result<Vec<Component>> {
    let frs = fragments(g)?;
    let f = g.f();
    let a = frs[0].anchor().unwrap();
    let linear = linear_presentation(g, a)?;
    let mut out = Vec::new();
    let mut offset = 0;
    for fr in &frs {
        let r = reduce(fr);
        let head = linear.constants[offset];
        for k in 0..r.n {
            out.push(Component {
                start: (a + offset + k) % f,
                len: 1,
                presentation: linear.slice(offset + k, 1, head),
                case: None,
                ab_top: None,
            });
        }
        let len = fr.len() - r.n;
        out.push(Component {
            start: (a + offset + r.n) % f,
            len,
            presentation: linear.slice(offset + r.n, len, head),
            case: Some(r.case),
            ab_top: ab_row(&r.reduced),
        });
        offset += fr.len();
    }
    Ok(out)
}

/// The presentation of a gene read linearly from column a: factor k carries
/// column a+k (rows swapped past the end, as the gene is 2f-periodic) and
/// the equation closing the cycle is left out.
pub fn linear_presentation(g: &Gene, a: usize) -> Result<KisinPresentation> {
    let cyc = presentation_of_gene(g)?;
    let f = g.f();
    let constants = (0..f)
        .map(|k| match g.column((a + k) as i64) {
            (Letter::O, _) => Constant::ZeroOne,
            (_, Letter::O) => Constant::OneZero,
            _ => Constant::Free,
        })
        .collect();
    let mut equations = Vec::new();
    if !cyc.equations.is_empty() {
        let dom = dominant_letters(g)?;
        for k in 0..f - 1 {
            let j = (a + k) as i64;
            let d = dom.get(j);
            if d == dom.get(j + 1) {
                let (x, y) = g.column(j);
                equations.push(Equation { i: k, lambda: bit(x == d), mu: bit(y == d) });
            }
        }
    }
    Ok(KisinPresentation { n: f, cyclic: false, constants, equations, shape: None })
}
