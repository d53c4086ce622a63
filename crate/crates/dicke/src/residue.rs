//! Exact spectral decompositions of Dicke populations via residue calculus.
//!
//! Starting from |m0⟩, the Laplace transform of the cascade is a rational
//! function with poles at the ladder factors of the window [m, m0]:
//!
//! ```text
//! ρ_m(τ) = Σ_poles Res[ f_{m0,m}(z, τ) ],
//! f_{m0,m}(z, τ) = (−1)^{m0−m} (h_{m0}···h_{m+1}) / ((z−h_{m0})···(z−h_m)) · e^{−zτ}
//! ```
//!
//! with τ = Γt. A pole is simple when its ladder value appears once in the
//! window and double when a degenerate partner pair (k, N+1−k) lies entirely
//! inside it. Simple poles contribute constants, double poles contribute
//! affine-in-τ coefficients; everything is exact rational arithmetic.
//!
//! Products of ladder differences collapse to factorial ratios through
//! h_j − h_k = (j−k)(N+1−j−k), and the harmonic-number tables turn the
//! derivative sums of second-order residues into O(1) lookups per pole.

use std::collections::BTreeMap;

use rayon::prelude::*;
use rug::{Integer, Rational};

use crate::affine::AffineCoefficient;
use crate::error::{Error, Result};
use crate::ladder::{LadderModel, PoleEntry};

/// One residue contribution: the affine coefficient of e^{−pole·τ}.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralTerm {
    /// Pole location h_j (an eigenvalue of the diagonal Lindblad action).
    pub pole: u64,
    /// Exact coefficient, affine in τ = Γt.
    pub coeff: AffineCoefficient,
}

/// The complete closed form of one population: ρ_m(τ) = Σ coeff_j(τ)·e^{−h_j τ}.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    n: u32,
    m0: u32,
    m: u32,
    terms: Vec<SpectralTerm>,
}

impl SpectralDecomposition {
    /// Number of emitters.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Initial excitation.
    pub fn m0(&self) -> u32 {
        self.m0
    }

    /// Target state.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Terms with distinct poles, ascending by pole value.
    pub fn terms(&self) -> &[SpectralTerm] {
        &self.terms
    }

    /// Σ of intercepts; equals δ_{m,m0} exactly (the t = 0 initial condition).
    pub fn intercept_sum(&self) -> Rational {
        let mut s = Rational::new();
        for t in &self.terms {
            s += &t.coeff.intercept;
        }
        s
    }

    /// Exact evaluation at rational τ, leaving the exponentials symbolic is
    /// not possible; this multiplies each affine coefficient out at τ and
    /// returns the (pole, weight) list for external summation.
    pub fn weights_at(&self, tau: &Rational) -> Vec<(u64, Rational)> {
        self.terms
            .iter()
            .map(|t| (t.pole, t.coeff.eval_exact(tau)))
            .collect()
    }
}

/// Shared exact tables for decompositions with a fixed (N, m0).
pub(crate) struct Tables {
    n: u32,
    m0: u32,
    /// k! for k = 0..=N.
    fact: Vec<Integer>,
    /// Harmonic numbers H_k = Σ_{i≤k} 1/i for k = 0..=N.
    harmonic: Vec<Rational>,
    /// num[m] = Π_{k=m+1}^{m0} h_k, the numerator shared by row m.
    num: Vec<Integer>,
}

impl Tables {
    pub(crate) fn new(model: &LadderModel, m0: u32) -> Self {
        let n = model.n();
        let cap = n as usize + 1;
        let mut fact = Vec::with_capacity(cap);
        fact.push(Integer::from(1));
        for k in 1..=n as u64 {
            let next = Integer::from(fact.last().unwrap() * k);
            fact.push(next);
        }
        let mut harmonic = Vec::with_capacity(cap);
        harmonic.push(Rational::new());
        for k in 1..=n as i64 {
            let next = harmonic.last().unwrap().clone() + Rational::from((1, k));
            harmonic.push(next);
        }
        let mut num = vec![Integer::from(1); m0 as usize + 1];
        for m in (0..m0).rev() {
            num[m as usize] = Integer::from(&num[m as usize + 1] * model.h(m + 1));
        }
        Tables { n, m0, fact, harmonic, num }
    }

    /// Π of the integers in [lo, hi] (empty ⇒ 1); the range must not cross 0.
    fn ranged(&self, lo: i64, hi: i64) -> (bool, Integer) {
        if lo > hi {
            return (false, Integer::from(1));
        }
        debug_assert!(lo > 0 || hi < 0);
        if lo > 0 {
            let q = Integer::from(&self.fact[hi as usize] / &self.fact[lo as usize - 1]);
            (false, q)
        } else {
            let q = Integer::from(&self.fact[(-lo) as usize] / &self.fact[(-hi) as usize - 1]);
            ((hi - lo + 1) % 2 == 1, q)
        }
    }

    /// Π of the integers in [lo, hi] skipping 0; requires lo ≤ 0 ≤ hi.
    fn ranged_skip_zero(&self, lo: i64, hi: i64) -> (bool, Integer) {
        let (s1, p1) = self.ranged(lo, -1);
        let (s2, p2) = self.ranged(1, hi);
        (s1 ^ s2, p1 * p2)
    }

    /// Simple-pole residue coefficient for row m at pole index j.
    fn simple(&self, m: u32, j: u32) -> Rational {
        let (m, m0, j) = (m as i64, self.m0 as i64, j as i64);
        let mirror = self.n as i64 + 1 - j;
        // Π (j−k) over k in [m, m0] \ {j}.
        let (mut neg, mut den) = self.ranged_skip_zero(j - m0, j - m);
        if mirror == j {
            // Odd-N central pole: the second factor set repeats the first.
            neg = false;
            den.square_mut();
        } else {
            // Π (mirror−k) over the same k; no zero since N+1−j is outside
            // the window, then drop the k = j factor (mirror − j).
            let (s2, p2) = self.ranged(mirror - m0, mirror - m);
            den *= p2;
            neg ^= s2;
            let excl = mirror - j;
            den.div_exact_u_mut(excl.unsigned_abs() as u32);
            neg ^= excl < 0;
        }
        neg ^= (m0 - m) % 2 == 1; // prefactor (−1)^{m0−m}
        let mut r = Rational::from((self.num[m as usize].clone(), den));
        if neg {
            r = -r;
        }
        r
    }

    /// Double-pole residue for row m at the degenerate pair (l, u), l < u.
    ///
    /// With P̃ the coefficient of the pair-depleted rational part evaluated at
    /// the pole, the second-order residue is −P̃·(τ + S), where S sums
    /// 1/(h−h_k) over the window minus the pair.
    fn degenerate(&self, m: u32, l: u32, u: u32) -> AffineCoefficient {
        let (m, m0, l, u) = (m as i64, self.m0 as i64, l as i64, u as i64);
        let gap = u - l;
        // Π (u−k) over k in [m, m0] \ {l, u}: split range, drop (u−l).
        let (mut neg, mut den) = self.ranged_skip_zero(u - m0, u - m);
        den.div_exact_u_mut(gap as u32);
        // Π (l−k) over the same k: drop the (l−u) factor.
        let (s2, p2) = self.ranged_skip_zero(l - m0, l - m);
        den *= p2;
        neg ^= s2;
        den.div_exact_u_mut(gap as u32);
        neg ^= true; // sign of the dropped (l−u) = −gap
        neg ^= (m0 - m) % 2 == 1;
        let mut p_tilde = Rational::from((self.num[m as usize].clone(), den));
        if neg {
            p_tilde = -p_tilde;
        }
        // S = [H(l−m) − H(m0−l) − H(u−m) + H(m0−u) + 2/gap] / gap.
        let h = |k: i64| &self.harmonic[k as usize];
        let mut s = Rational::from(h(l - m) - h(m0 - l));
        s -= h(u - m);
        s += h(m0 - u);
        s += Rational::from((2, gap));
        s /= Rational::from(gap);
        let slope = -p_tilde.clone();
        let intercept = -(p_tilde * s);
        AffineCoefficient::new(intercept, slope)
    }

    /// Full row m as a spectral decomposition.
    fn row(&self, model: &LadderModel, m: u32) -> SpectralDecomposition {
        let spectrum = model
            .pole_spectrum(m, self.m0)
            .expect("validated window");
        let terms = spectrum
            .entries()
            .iter()
            .map(|e| {
                let coeff = match e.indices[..] {
                    [j] => AffineCoefficient::constant(self.simple(m, j)),
                    [l, u] => self.degenerate(m, l, u),
                    _ => unreachable!("pole multiplicity is 1 or 2"),
                };
                SpectralTerm { pole: e.value, coeff }
            })
            .collect();
        SpectralDecomposition {
            n: self.n,
            m0: self.m0,
            m,
            terms,
        }
    }
}

fn validate_pair(model: &LadderModel, m0: u32, m: u32) -> Result<()> {
    let n = model.n();
    if m0 < 1 || m0 > n {
        return Err(Error::IndexOutOfRange { m: m0, lo: 1, hi: n });
    }
    if m < 1 {
        return Err(Error::IndexOutOfRange { m, lo: 1, hi: m0 });
    }
    if m > m0 {
        return Err(Error::Unreachable { m, m0 });
    }
    Ok(())
}

/// Locates pole index `j` in the window [m, m0] and checks its multiplicity.
fn pole_entry_for(
    model: &LadderModel,
    m0: u32,
    m: u32,
    j: u32,
    expected: usize,
) -> Result<PoleEntry> {
    validate_pair(model, m0, m)?;
    if j < m || j > m0 {
        return Err(Error::IndexOutOfRange { m: j, lo: m, hi: m0 });
    }
    let spectrum = model.pole_spectrum(m, m0)?;
    let entry = spectrum
        .get(model.ladder_factor(j)?)
        .expect("pole of an in-window index is present")
        .clone();
    if entry.multiplicity() != expected {
        return Err(Error::WrongMultiplicity {
            pole: entry.value,
            lo: m,
            hi: m0,
            found: entry.multiplicity(),
            expected,
        });
    }
    Ok(entry)
}

/// Order-1 residue coefficient of e^{−h_j τ} in ρ_m for the start |m0⟩:
/// (−1)^{m0−m} (h_{m0}···h_{m+1}) / Π_{k∈[m,m0], k≠j} (h_j − h_k).
pub fn simple_coefficient(model: &LadderModel, m0: u32, m: u32, j: u32) -> Result<Rational> {
    pole_entry_for(model, m0, m, j, 1)?;
    Ok(Tables::new(model, m0).simple(m, j))
}

/// Order-2 residue coefficient (slope, intercept) at a degenerate pole;
/// `j` may name either member of the pair.
pub fn degenerate_coefficient(
    model: &LadderModel,
    m0: u32,
    m: u32,
    j: u32,
) -> Result<AffineCoefficient> {
    let entry = pole_entry_for(model, m0, m, j, 2)?;
    let (l, u) = (entry.indices[0], entry.indices[1]);
    Ok(Tables::new(model, m0).degenerate(m, l, u))
}

/// The same order-2 coefficient obtained by the independent limiting route:
/// split the pair h_u = h_l + ε into two simple poles, expand both simple
/// residues to first order in ε and cancel the 1/ε singularities.
///
/// Stated for the fully inverted start, so `m0` must equal N.
pub fn degenerate_coefficient_limit(
    model: &LadderModel,
    m0: u32,
    m: u32,
    j: u32,
) -> Result<AffineCoefficient> {
    if m0 != model.n() {
        return Err(Error::IndexOutOfRange {
            m: m0,
            lo: model.n(),
            hi: model.n(),
        });
    }
    let entry = pole_entry_for(model, m0, m, j, 2)?;
    let (l, u) = (entry.indices[0], entry.indices[1]);
    Ok(limit_route(model, m0, m, l, u))
}

/// First-order jet in ε: value = ε^pow · (c0 + c1·ε + O(ε²)).
#[derive(Clone)]
struct Jet {
    pow: i32,
    c0: Rational,
    c1: Rational,
}

impl Jet {
    fn constant(c: Rational) -> Self {
        Jet { pow: 0, c0: c, c1: Rational::new() }
    }

    /// c + ε
    fn linear(c: Rational) -> Self {
        Jet { pow: 0, c0: c, c1: Rational::from(1) }
    }

    /// ±ε
    fn epsilon(sign: i32) -> Self {
        Jet { pow: 1, c0: Rational::from(sign), c1: Rational::new() }
    }

    fn mul(&self, rhs: &Jet) -> Jet {
        Jet {
            pow: self.pow + rhs.pow,
            c0: Rational::from(&self.c0 * &rhs.c0),
            c1: Rational::from(&self.c0 * &rhs.c1) + Rational::from(&self.c1 * &rhs.c0),
        }
    }

    fn inv(&self) -> Jet {
        debug_assert!(self.c0 != 0);
        let inv0 = Rational::from(self.c0.recip_ref());
        let c1 = -Rational::from(&self.c1 * &inv0) * &inv0;
        Jet { pow: -self.pow, c0: inv0, c1 }
    }
}

fn limit_route(model: &LadderModel, m0: u32, m: u32, l: u32, u: u32) -> AffineCoefficient {
    let pole = model.h(l) as i64;
    // Perturbed ladder: ĥ_u = h + ε, everything else unchanged.
    let sign = if (m0 - m) % 2 == 1 { -1i64 } else { 1 };
    let mut numerator = Jet::constant(Rational::from(sign));
    for k in m + 1..=m0 {
        let f = if k == u {
            Jet::linear(Rational::from(pole))
        } else {
            Jet::constant(Rational::from(model.h(k) as i64))
        };
        numerator = numerator.mul(&f);
    }
    let denominator = |i: u32| -> Jet {
        let mut d = Jet::constant(Rational::from(1));
        for k in m..=m0 {
            if k == i {
                continue;
            }
            let f = if k == u {
                // ĥ_l − (h+ε) = −ε.
                Jet::epsilon(-1)
            } else if i == u {
                if k == l {
                    Jet::epsilon(1)
                } else {
                    Jet::linear(Rational::from(pole - model.h(k) as i64))
                }
            } else {
                Jet::constant(Rational::from(pole - model.h(k) as i64))
            };
            d = d.mul(&f);
        }
        d
    };
    let term_l = numerator.mul(&denominator(l).inv());
    let term_u = numerator.mul(&denominator(u).inv());
    debug_assert_eq!(term_l.pow, -1);
    debug_assert_eq!(term_u.pow, -1);
    // e^{−ĥ_u τ} = e^{−hτ}(1 − τ·ε + O(ε²)): the ε-part of term_u picks up
    // an extra −τ·c0 with slope bookkeeping done in the affine result.
    let residue_intercept = Rational::from(&term_l.c1 + &term_u.c1);
    let residue_slope = -term_u.c0.clone();
    let cancel = Rational::from(&term_l.c0 + &term_u.c0);
    assert!(cancel == 0, "1/ε singularities must cancel for a degenerate pair");
    AffineCoefficient::new(residue_intercept, residue_slope)
}

/// Exact closed form of ρ_m(t) for the pure start |m0⟩.
///
/// Enumerates the distinct poles of the window [m, m0]; multiplicity-1 poles
/// get order-1 residues, multiplicity-2 poles order-2 residues. Even N, odd N
/// (central pole simple) and any m0 are handled by the same window rule.
pub fn decompose(model: &LadderModel, m0: u32, m: u32) -> Result<SpectralDecomposition> {
    validate_pair(model, m0, m)?;
    let tables = Tables::new(model, m0);
    Ok(tables.row(model, m))
}

/// Every decomposition of a (N, m0) family, built once and shared.
///
/// Rows are immutable after construction and safe to evaluate concurrently.
/// The ground row carries the exact coefficients of ρ_0(τ) − 1 implied by
/// trace conservation, used as the evaluator's cancellation diagnostic.
#[derive(Debug, Clone)]
pub struct DecompositionSet {
    model: LadderModel,
    m0: u32,
    rows: Vec<SpectralDecomposition>,
    ground_row: Vec<SpectralTerm>,
}

impl DecompositionSet {
    /// Builds all rows m = 1..=m0 (in parallel for large families).
    pub fn build(model: &LadderModel, m0: u32) -> Result<Self> {
        if m0 < 1 || m0 > model.n() {
            return Err(Error::IndexOutOfRange {
                m: m0,
                lo: 1,
                hi: model.n(),
            });
        }
        let tables = Tables::new(model, m0);
        let rows: Vec<SpectralDecomposition> = (1..=m0)
            .into_par_iter()
            .map(|m| tables.row(model, m))
            .collect();
        // d_j = −Σ_m c_{m,j}: ρ_0(τ) = 1 + Σ_j d_j(τ) e^{−h_j τ}, exactly.
        let fold = |mut acc: BTreeMap<u64, AffineCoefficient>, row: &SpectralDecomposition| {
            for t in row.terms() {
                *acc.entry(t.pole).or_default() += t.coeff.clone();
            }
            acc
        };
        let sums = rows
            .par_chunks(64)
            .map(|chunk| chunk.iter().fold(BTreeMap::new(), fold))
            .reduce(BTreeMap::new, |mut a, b| {
                for (pole, coeff) in b {
                    *a.entry(pole).or_default() += coeff;
                }
                a
            });
        let ground_row = sums
            .into_iter()
            .map(|(pole, mut coeff)| {
                coeff.neg_assign();
                SpectralTerm { pole, coeff }
            })
            .collect();
        Ok(DecompositionSet {
            model: *model,
            m0,
            rows,
            ground_row,
        })
    }

    pub fn model(&self) -> &LadderModel {
        &self.model
    }

    pub fn m0(&self) -> u32 {
        self.m0
    }

    /// Row for state m (1 ≤ m ≤ m0).
    pub fn row(&self, m: u32) -> &SpectralDecomposition {
        &self.rows[m as usize - 1]
    }

    pub fn rows(&self) -> &[SpectralDecomposition] {
        &self.rows
    }

    /// Coefficients of ρ_0(τ) − 1, from trace conservation.
    pub fn ground_row(&self) -> &[SpectralTerm] {
        &self.ground_row
    }

    /// Distinct poles of the window [1, m0], ascending.
    pub fn distinct_poles(&self) -> Vec<u64> {
        self.model
            .pole_spectrum(1, self.m0)
            .expect("window [1, m0] is valid")
            .entries()
            .iter()
            .map(|e| e.value)
            .collect()
    }
}

/// One row of the coefficient matrix: state index and sparse (pole, coeff)
/// entries in descending pole order.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixRow {
    pub m: u32,
    pub entries: Vec<(u64, AffineCoefficient)>,
}

/// Lower-triangular matrix mapping the exponential vector (e^{−h_j τ}) to the
/// population vector (ρ_{m0}, …, ρ_1), over distinct poles.
///
/// Row m has entries only at poles of the window [m, m0]: higher states never
/// depend on exponentials that enter the cascade below them.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    pub n: u32,
    pub m0: u32,
    pub gamma: f64,
    /// Distinct poles of the window [1, m0], descending.
    pub poles: Vec<u64>,
    /// Rows for m = m0 down to 1.
    pub rows: Vec<MatrixRow>,
}

/// Assembles the coefficient matrix for the start |m0⟩.
pub fn coefficient_matrix(model: &LadderModel, m0: u32) -> Result<CoefficientMatrix> {
    let set = DecompositionSet::build(model, m0)?;
    Ok(matrix_from_set(&set))
}

pub(crate) fn matrix_from_set(set: &DecompositionSet) -> CoefficientMatrix {
    let mut poles = set.distinct_poles();
    poles.reverse();
    let rows = (1..=set.m0())
        .rev()
        .map(|m| {
            let mut entries: Vec<(u64, AffineCoefficient)> = set
                .row(m)
                .terms()
                .iter()
                .map(|t| (t.pole, t.coeff.clone()))
                .collect();
            entries.sort_by(|a, b| b.0.cmp(&a.0));
            MatrixRow { m, entries }
        })
        .collect();
    CoefficientMatrix {
        n: set.model().n(),
        m0: set.m0(),
        gamma: set.model().gamma(),
        poles,
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(n: u32) -> LadderModel {
        LadderModel::new(n, 1.0).unwrap()
    }

    fn rat(p: i64, q: i64) -> Rational {
        Rational::from((p, q))
    }

    #[test]
    fn top_state_coefficient_is_one() {
        for n in [1u32, 2, 5, 8, 31] {
            let md = model(n);
            assert_eq!(simple_coefficient(&md, n, n, n).unwrap(), rat(1, 1));
        }
    }

    #[test]
    fn simple_coefficients_n4_top_cascade() {
        // ρ_3(τ) = 2e^{−4τ} − 2e^{−6τ} from integrating the cascade by hand.
        let md = model(4);
        assert_eq!(simple_coefficient(&md, 4, 3, 4).unwrap(), rat(2, 1));
        assert_eq!(simple_coefficient(&md, 4, 3, 3).unwrap(), rat(-2, 1));
    }

    #[test]
    fn simple_coefficients_partial_start() {
        // N = 4 from |2⟩: ρ_1(τ) = 3e^{−4τ} − 3e^{−6τ}.
        let md = model(4);
        assert_eq!(simple_coefficient(&md, 2, 1, 1).unwrap(), rat(3, 1));
        assert_eq!(simple_coefficient(&md, 2, 1, 2).unwrap(), rat(-3, 1));
    }

    #[test]
    fn simple_rejects_degenerate_pole() {
        let md = model(2);
        assert!(matches!(
            simple_coefficient(&md, 2, 1, 2),
            Err(Error::WrongMultiplicity { expected: 1, .. })
        ));
    }

    #[test]
    fn degenerate_n2() {
        // ρ_1(τ) = 2τ·e^{−2τ}.
        let md = model(2);
        let c = degenerate_coefficient(&md, 2, 1, 2).unwrap();
        assert_eq!(c.slope, rat(2, 1));
        assert_eq!(c.intercept, rat(0, 1));
    }

    #[test]
    fn degenerate_n3() {
        // ρ_1(τ) = 12τ·e^{−3τ} − 12e^{−3τ} + 12e^{−4τ}.
        let md = model(3);
        let c = degenerate_coefficient(&md, 3, 1, 3).unwrap();
        assert_eq!(c.slope, rat(12, 1));
        assert_eq!(c.intercept, rat(-12, 1));
        assert_eq!(simple_coefficient(&md, 3, 1, 2).unwrap(), rat(12, 1));
    }

    #[test]
    fn degenerate_n4_bottom_row() {
        // Order-2 residues of −144 e^{−zτ}/((z−4)²(z−6)²).
        let md = model(4);
        let c4 = degenerate_coefficient(&md, 4, 1, 4).unwrap();
        assert_eq!(c4.slope, rat(36, 1));
        assert_eq!(c4.intercept, rat(-36, 1));
        let c6 = degenerate_coefficient(&md, 4, 1, 3).unwrap();
        assert_eq!(c6.slope, rat(36, 1));
        assert_eq!(c6.intercept, rat(36, 1));
    }

    #[test]
    fn degenerate_rejects_simple_pole() {
        let md = model(3);
        assert!(matches!(
            degenerate_coefficient(&md, 3, 1, 2),
            Err(Error::WrongMultiplicity { expected: 2, .. })
        ));
    }

    #[test]
    fn limit_route_matches_examples() {
        let md = model(2);
        let c = degenerate_coefficient_limit(&md, 2, 1, 2).unwrap();
        assert_eq!((c.slope.clone(), c.intercept.clone()), (rat(2, 1), rat(0, 1)));

        let md = model(3);
        let c = degenerate_coefficient_limit(&md, 3, 1, 3).unwrap();
        assert_eq!((c.slope.clone(), c.intercept.clone()), (rat(12, 1), rat(-12, 1)));

        // N = 4 from |4⟩: ρ_2(τ) = 6e^{−4τ} − (12τ + 6)e^{−6τ}.
        let md = model(4);
        let c = degenerate_coefficient_limit(&md, 4, 2, 3).unwrap();
        assert_eq!((c.slope.clone(), c.intercept.clone()), (rat(-12, 1), rat(-6, 1)));
    }

    #[test]
    fn limit_route_equals_derivative_route() {
        for n in 2..=12u32 {
            let md = model(n);
            for m in 1..=n {
                for e in md.pole_spectrum(m, n).unwrap().entries() {
                    if e.multiplicity() == 2 {
                        let j = e.indices[1];
                        let a = degenerate_coefficient(&md, n, m, j).unwrap();
                        let b = degenerate_coefficient_limit(&md, n, m, j).unwrap();
                        assert_eq!(a, b, "N={n} m={m} pole={}", e.value);
                    }
                }
            }
        }
    }

    #[test]
    fn limit_route_requires_full_inversion() {
        let md = model(4);
        assert!(degenerate_coefficient_limit(&md, 3, 1, 3).is_err());
    }

    #[test]
    fn decompose_top_state() {
        let md = model(4);
        let d = decompose(&md, 4, 4).unwrap();
        assert_eq!(d.terms().len(), 1);
        assert_eq!(d.terms()[0].pole, 4);
        assert_eq!(d.terms()[0].coeff, AffineCoefficient::constant(rat(1, 1)));
    }

    #[test]
    fn decompose_odd_n_central_pole_simple() {
        // N = 3 from |3⟩: ρ_2(τ) = 3e^{−3τ} − 3e^{−4τ}.
        let md = model(3);
        let d = decompose(&md, 3, 2).unwrap();
        let terms = d.terms();
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0].pole, 3);
        assert_eq!(terms[0].coeff, AffineCoefficient::constant(rat(3, 1)));
        assert_eq!(terms[1].pole, 4);
        assert_eq!(terms[1].coeff, AffineCoefficient::constant(rat(-3, 1)));
    }

    #[test]
    fn decompose_initial_state_single_exponential() {
        let md = model(4);
        let d = decompose(&md, 2, 2).unwrap();
        assert_eq!(d.terms().len(), 1);
        assert_eq!(d.terms()[0].pole, 6);
        assert_eq!(d.terms()[0].coeff, AffineCoefficient::constant(rat(1, 1)));
    }

    #[test]
    fn decompose_rejects_unreachable() {
        let md = model(4);
        assert!(matches!(decompose(&md, 2, 3), Err(Error::Unreachable { .. })));
    }

    #[test]
    fn intercept_sum_is_kronecker_delta() {
        for n in 1..=14u32 {
            let md = model(n);
            for m0 in 1..=n {
                for m in 1..=m0 {
                    let d = decompose(&md, m0, m).unwrap();
                    let expect = if m == m0 { rat(1, 1) } else { rat(0, 1) };
                    assert_eq!(d.intercept_sum(), expect, "N={n} m0={m0} m={m}");
                }
            }
        }
    }

    #[test]
    fn simple_region_has_zero_slopes() {
        for n in 2..=13u32 {
            let md = model(n);
            for m in (n / 2 + 1)..=n {
                let d = decompose(&md, n, m).unwrap();
                assert!(d.terms().iter().all(|t| t.coeff.slope == 0));
            }
        }
    }

    #[test]
    fn matrix_n4_hand_cascade() {
        // τ = Γt; rows from integrating the N = 4 cascade by hand.
        let m = coefficient_matrix(&model(4), 4).unwrap();
        assert_eq!(m.poles, vec![6, 4]);
        let row = |i: usize| &m.rows[i];
        assert_eq!(row(0).m, 4);
        assert_eq!(row(0).entries, vec![(4, AffineCoefficient::constant(rat(1, 1)))]);
        assert_eq!(
            row(1).entries,
            vec![
                (6, AffineCoefficient::constant(rat(-2, 1))),
                (4, AffineCoefficient::constant(rat(2, 1))),
            ]
        );
        assert_eq!(
            row(2).entries,
            vec![
                (6, AffineCoefficient::new(rat(-6, 1), rat(-12, 1))),
                (4, AffineCoefficient::constant(rat(6, 1))),
            ]
        );
        assert_eq!(
            row(3).entries,
            vec![
                (6, AffineCoefficient::new(rat(36, 1), rat(36, 1))),
                (4, AffineCoefficient::new(rat(-36, 1), rat(36, 1))),
            ]
        );
    }

    #[test]
    fn matrix_small_systems() {
        let m = coefficient_matrix(&model(2), 2).unwrap();
        assert_eq!(m.poles, vec![2]);
        assert_eq!(m.rows[0].entries, vec![(2, AffineCoefficient::constant(rat(1, 1)))]);
        assert_eq!(
            m.rows[1].entries,
            vec![(2, AffineCoefficient::new(rat(0, 1), rat(2, 1)))]
        );

        let m = coefficient_matrix(&model(1), 1).unwrap();
        assert_eq!(m.poles, vec![1]);
        assert_eq!(m.rows[0].entries, vec![(1, AffineCoefficient::constant(rat(1, 1)))]);
    }

    #[test]
    fn matrix_triangularity() {
        for n in [4u32, 5, 9, 12] {
            let md = model(n);
            let mat = coefficient_matrix(&md, n).unwrap();
            for row in &mat.rows {
                let window = md.pole_spectrum(row.m, n).unwrap();
                for (pole, _) in &row.entries {
                    assert!(window.get(*pole).is_some());
                }
            }
        }
    }

    #[test]
    fn ground_row_closes_trace_at_zero() {
        for (n, m0) in [(4u32, 4u32), (5, 3), (9, 9), (12, 7)] {
            let set = DecompositionSet::build(&model(n), m0).unwrap();
            let mut total = Rational::new();
            for t in set.ground_row() {
                total += &t.coeff.intercept;
            }
            // ρ_0(0) = 1 + Σ d_j(0) = 0.
            assert_eq!(total, rat(-1, 1));
        }
    }

    #[test]
    fn even_n_matches_literal_paper_convention() {
        // For even N and m0 = N the prefactor (−1)^{m0−m} coincides with the
        // (−1)^m of the fully inverted generating function; check the simple
        // region against a naive direct-product evaluation.
        for n in [4u32, 6, 10] {
            let md = model(n);
            for m in (n / 2 + 1)..=n {
                for j in m..=n {
                    let got = simple_coefficient(&md, n, m, j).unwrap();
                    let mut den = Rational::from(1);
                    for k in m..=n {
                        if k != j {
                            den *= Rational::from(md.h(j) as i64 - md.h(k) as i64);
                        }
                    }
                    let mut num = Rational::from(if m % 2 == 1 { -1 } else { 1 });
                    for k in m + 1..=n {
                        num *= Rational::from(md.h(k));
                    }
                    assert_eq!(got, num / den, "N={n} m={m} j={j}");
                }
            }
        }
    }
}
