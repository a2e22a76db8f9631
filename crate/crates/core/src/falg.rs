//! Lusztig's algebra `f` as the quotient of the free algebra by the radical
//! of the form.
//!
//! An element is zero in `f` exactly when it pairs to zero with a basis of
//! its weight space. Each weight space records a basis of pivot words: the
//! lexicographically first words independent modulo the radical. A word
//! `theta_i w` can only be a pivot when `w` is a pivot of the lower weight,
//! so the rank is computed on the candidates `theta_i p` and never on the
//! full set of words. Full Gram matrices are available on request for small
//! weights.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use parking_lot::RwLock;
use serde::Serialize;

use crate::cartan::{CartanDatum, Weight};
use crate::error::{Error, Result};
use crate::exec;
use crate::freealg::{same_datum, weight_norm, Element, IntegralTerms, Word, WordForm};
use crate::linalg;
use crate::scalars::{LaurentPoly, RationalFn};

/// Default bound on weight heights.
pub const DEFAULT_MAX_HEIGHT: i64 = 8;

/// Zero tests above this height recurse through the derivations `_j r`
/// instead of using a basis of the weight space.
pub const BASIS_HEIGHT: i64 = 6;

/// One weight space `f_nu`.
#[derive(Debug)]
pub struct WeightSpace {
    weight: Weight,
    word_count: u128,
    norm: RationalFn,
    pivots: Vec<Word>,
    pivot_gram: Vec<Vec<LaurentPoly>>,
}

impl WeightSpace {
    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    /// Number of words of this weight (a multinomial coefficient).
    pub fn word_count(&self) -> u128 {
        self.word_count
    }

    /// Every word of this weight, lexicographically sorted.
    pub fn words(&self) -> Vec<Word> {
        Word::all_of_weight(&self.weight)
    }

    /// The common factor `weight_norm(nu)` of every pairing in this space.
    pub fn norm(&self) -> &RationalFn {
        &self.norm
    }

    /// The basis words, in lexicographic order.
    pub fn pivot_words(&self) -> &[Word] {
        &self.pivots
    }

    /// Gram matrix of the basis words without the weight norm.
    pub fn pivot_gram(&self) -> &[Vec<LaurentPoly>] {
        &self.pivot_gram
    }

    /// `dim f_nu`.
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn report(&self) -> WeightSpaceReport {
        WeightSpaceReport {
            weight: self.weight.coords().to_vec(),
            words: self.word_count,
            rank: self.rank(),
            pivots: self.pivots.iter().map(|w| w.letters().collect()).collect(),
        }
    }
}

/// JSON report for one weight space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightSpaceReport {
    pub weight: Vec<i64>,
    pub words: u128,
    pub rank: usize,
    pub pivots: Vec<Vec<usize>>,
}

fn multinomial(nu: &Weight) -> u128 {
    let mut total = 0u128;
    let mut acc = 1u128;
    for &k in nu.coords() {
        for j in 1..=k as u128 {
            total += 1;
            acc = acc * total / j;
        }
    }
    acc
}

/// Largest word count for which [`Algebra::gram`] builds a full matrix.
pub const MAX_FULL_GRAM_WORDS: u128 = 2000;

/// A Cartan datum with the caches needed to compute in `f`.
///
/// Thread-safe: caches are behind locks and every cached value is a pure
/// function of its key.
pub struct Algebra {
    datum: Arc<CartanDatum>,
    form: WordForm,
    spaces: RwLock<HashMap<Weight, Arc<WeightSpace>>>,
    max_height: i64,
    parallel: bool,
}

impl Algebra {
    pub fn new(datum: CartanDatum) -> Self {
        Self::from_arc(Arc::new(datum))
    }

    pub fn from_arc(datum: Arc<CartanDatum>) -> Self {
        Self {
            form: WordForm::new(datum.clone()),
            datum,
            spaces: RwLock::new(HashMap::new()),
            max_height: DEFAULT_MAX_HEIGHT,
            parallel: exec::PARALLEL_AVAILABLE,
        }
    }

    /// Sets the bound on weight heights; values below 1 are raised to 1.
    pub fn with_max_height(mut self, h: i64) -> Self {
        self.max_height = h.max(1);
        self
    }

    /// Requests parallel (`true`) or sequential evaluation. Parallelism only
    /// takes effect when the `parallel` feature is compiled in.
    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel && exec::PARALLEL_AVAILABLE;
        self
    }

    pub fn datum(&self) -> &Arc<CartanDatum> {
        &self.datum
    }

    pub fn max_height(&self) -> i64 {
        self.max_height
    }

    pub fn parallel(&self) -> bool {
        self.parallel
    }

    pub fn form(&self) -> &WordForm {
        &self.form
    }

    pub fn gen(&self, i: usize) -> Result<Element> {
        Element::generator(&self.datum, i)
    }

    pub fn divided_power(&self, i: usize, n: i64) -> Result<Element> {
        Element::divided_power(&self.datum, i, n)
    }

    pub fn pair(&self, x: &Element, y: &Element) -> Result<RationalFn> {
        self.check_element(x)?;
        self.check_element(y)?;
        let ys = y.components();
        let mut total = RationalFn::zero();
        for (nu, xc) in x.components() {
            let Some(yc) = ys.get(&nu) else { continue };
            let targets: Vec<Word> = xc.terms().keys().cloned().collect();
            let vals = self.pairings(yc, &targets);
            let mut inner = RationalFn::zero();
            for (c, p) in xc.terms().values().zip(&vals) {
                if !p.is_zero() {
                    inner += &(c * p);
                }
            }
            if !inner.is_zero() {
                total += &(&inner * &weight_norm(&self.datum, &nu));
            }
        }
        Ok(total)
    }

    pub(crate) fn check_element(&self, x: &Element) -> Result<()> {
        if same_datum(x.datum(), &self.datum) {
            Ok(())
        } else {
            Err(Error::DatumMismatch)
        }
    }

    pub(crate) fn check_weight(&self, nu: &Weight) -> Result<()> {
        if nu.len() != self.datum.rank() {
            return Err(Error::RankMismatch {
                expected: self.datum.rank(),
                found: nu.len(),
            });
        }
        if !nu.is_nonnegative() {
            return Err(Error::NegativeWeight(nu.coords().to_vec()));
        }
        if nu.height() > self.max_height {
            return Err(Error::ResourceLimit {
                height: nu.height(),
                bound: self.max_height,
            });
        }
        Ok(())
    }

    /// The weight space `f_nu`, built on first use.
    pub fn weight_space(&self, nu: &Weight) -> Result<Arc<WeightSpace>> {
        self.check_weight(nu)?;
        if let Some(ws) = self.spaces.read().get(nu) {
            return Ok(ws.clone());
        }
        let mut lower = Vec::new();
        for i in 0..self.datum.rank() {
            if let Some(mu) = nu.minus_simple(i) {
                lower.push((i, self.weight_space(&mu)?));
            }
        }
        let ws = Arc::new(self.build_space(nu, &lower));
        Ok(self.spaces.write().entry(nu.clone()).or_insert(ws).clone())
    }

    /// Integral Gram matrix `P(s, t)` of a list of same-weight words.
    fn word_gram(&self, words: &[Word]) -> Vec<Vec<LaurentPoly>> {
        exec::map_collect(self.parallel, words, |u| {
            let y: IntegralTerms = HashMap::from([(u.clone(), LaurentPoly::one())]);
            self.form.dual(&y, words)
        })
    }

    fn build_space(&self, nu: &Weight, lower: &[(usize, Arc<WeightSpace>)]) -> WeightSpace {
        let (pivots, pivot_gram) = if nu.is_zero() {
            (vec![Word::empty()], vec![vec![LaurentPoly::one()]])
        } else {
            let candidates: BTreeSet<Word> = lower
                .iter()
                .flat_map(|(i, sub)| sub.pivot_words().iter().map(move |p| p.prepend(*i)))
                .collect();
            let candidates: Vec<Word> = candidates.into_iter().collect();
            let gram = self.word_gram(&candidates);
            let (_, cols) = linalg::rank_and_pivots(&gram, self.parallel);
            let pivot_gram = cols
                .iter()
                .map(|&a| cols.iter().map(|&b| gram[a][b].clone()).collect())
                .collect();
            (
                cols.into_iter().map(|c| candidates[c].clone()).collect(),
                pivot_gram,
            )
        };
        WeightSpace {
            weight: nu.clone(),
            word_count: multinomial(nu),
            norm: weight_norm(&self.datum, nu),
            pivots,
            pivot_gram,
        }
    }

    /// The full Gram matrix `(words[a], words[b])` over all words of weight
    /// `nu`, in lexicographic order.
    pub fn gram(&self, nu: &Weight) -> Result<(Vec<Word>, Vec<Vec<RationalFn>>)> {
        self.check_weight(nu)?;
        let n = multinomial(nu);
        if n > MAX_FULL_GRAM_WORDS {
            return Err(Error::ResourceLimit {
                height: nu.height(),
                bound: self.max_height,
            });
        }
        let words = Word::all_of_weight(nu);
        let norm = weight_norm(&self.datum, nu);
        let gram = self
            .word_gram(&words)
            .into_iter()
            .map(|row| row.iter().map(|p| norm.mul_laurent(p)).collect())
            .collect();
        Ok((words, gram))
    }

    /// `dim f_nu`.
    pub fn dim_weight(&self, nu: &Weight) -> Result<usize> {
        Ok(self.weight_space(nu)?.rank())
    }

    fn homogeneous(&self, x: &Element) -> Result<Option<Weight>> {
        self.check_element(x)?;
        x.homogeneous_weight()
    }

    /// `P(t, x)` for each target word `t`: the pairings of a homogeneous
    /// `x` up to the weight norm. Targets are split by first letter so the
    /// groups can run in parallel.
    pub(crate) fn pairings(&self, x: &Element, targets: &[Word]) -> Vec<RationalFn> {
        if x.is_zero() || targets.is_empty() {
            return vec![RationalFn::zero(); targets.len()];
        }
        let (xi, den) = x.clear_denominators();
        let den = RationalFn::from(den);
        let mut groups: Vec<(u8, Vec<usize>)> = Vec::new();
        for (k, t) in targets.iter().enumerate() {
            let first = t.bytes().first().copied().unwrap_or(u8::MAX);
            match groups.iter_mut().find(|(l, _)| *l == first) {
                Some((_, g)) => g.push(k),
                None => groups.push((first, vec![k])),
            }
        }
        let results = exec::map_collect(self.parallel, &groups, |(_, g)| {
            let ts: Vec<Word> = g.iter().map(|&k| targets[k].clone()).collect();
            self.form.dual(&xi, &ts)
        });
        let mut out = vec![RationalFn::zero(); targets.len()];
        for ((_, g), vals) in groups.iter().zip(results) {
            for (&k, p) in g.iter().zip(vals) {
                if !p.is_zero() {
                    out[k] = &RationalFn::from(p) / &den;
                }
            }
        }
        out
    }

    /// Whether a homogeneous `x` vanishes in `f`.
    ///
    /// Up to [`BASIS_HEIGHT`] this pairs `x` with the basis words. Above it,
    /// `x` vanishes exactly when every `_j r(x)` does, which avoids building
    /// bases at large weights.
    pub fn is_zero_in_f(&self, x: &Element) -> Result<bool> {
        let Some(nu) = self.homogeneous(x)? else {
            return Ok(true);
        };
        self.check_weight(&nu)?;
        let (terms, _) = x.clear_denominators();
        self.integral_is_zero(&terms, &nu)
    }

    fn integral_is_zero(&self, y: &IntegralTerms, nu: &Weight) -> Result<bool> {
        if y.is_empty() {
            return Ok(true);
        }
        if nu.height() <= BASIS_HEIGHT {
            let ws = self.weight_space(nu)?;
            return Ok(self
                .form
                .dual(y, ws.pivot_words())
                .iter()
                .all(LaurentPoly::is_zero));
        }
        for j in 0..self.datum.rank() {
            if let Some(mu) = nu.minus_simple(j) {
                if !self.integral_is_zero(&self.form.derive(y, j), &mu)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Whether `x - y` vanishes in `f`; both sides are split by weight.
    pub fn equal_in_f(&self, x: &Element, y: &Element) -> Result<bool> {
        self.check_element(x)?;
        self.check_element(y)?;
        let diff = x - y;
        for (_, c) in diff.components() {
            if !self.is_zero_in_f(&c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `x` lies in `_i f`, the kernel of `_i r` modulo the radical.
    pub fn membership_left(&self, i: usize, x: &Element) -> Result<bool> {
        self.datum.check_index(i)?;
        if self.homogeneous(x)?.is_none() {
            return Ok(true);
        }
        self.is_zero_in_f(&x.i_derivation(i)?)
    }

    /// `x` lies in `^i f`, the orthogonal complement of `f theta_i`.
    pub fn membership_right(&self, i: usize, x: &Element) -> Result<bool> {
        self.datum.check_index(i)?;
        let Some(nu) = self.homogeneous(x)? else {
            return Ok(true);
        };
        let Some(mu) = nu.minus_simple(i) else {
            return Ok(true);
        };
        self.check_weight(&nu)?;
        let basis: Vec<Word> = self
            .weight_space(&mu)?
            .pivot_words()
            .iter()
            .map(|p| p.append(i))
            .collect();
        Ok(self.pairings(x, &basis).iter().all(RationalFn::is_zero))
    }

    /// Projection of `x` onto `_I f = intersection of _i f over i in I`,
    /// along `sum_{i in I} theta_i f`.
    pub fn proj_left(&self, indices: &[usize], x: &Element) -> Result<Element> {
        self.project(indices, x, Side::Left)
    }

    /// Projection of `x` onto `^i f` along `f theta_i`.
    pub fn proj_right(&self, i: usize, x: &Element) -> Result<Element> {
        self.project(&[i], x, Side::Right)
    }

    /// The spanning words of `sum_{i in I} theta_i f_{nu - alpha_i}` (left)
    /// or `sum f_{nu - alpha_i} theta_i` (right) used by the projections.
    fn complement_span(&self, indices: &[usize], nu: &Weight, side: Side) -> Result<Vec<Word>> {
        let mut span = Vec::new();
        for &i in indices {
            if let Some(mu) = nu.minus_simple(i) {
                let ws = self.weight_space(&mu)?;
                span.extend(ws.pivot_words().iter().map(|p| match side {
                    Side::Left => p.prepend(i),
                    Side::Right => p.append(i),
                }));
            }
        }
        Ok(span)
    }

    fn project(&self, indices: &[usize], x: &Element, side: Side) -> Result<Element> {
        for (k, &i) in indices.iter().enumerate() {
            self.datum.check_index(i)?;
            if indices[..k].contains(&i) {
                return Err(Error::InvalidInput(format!("index {i} repeated")));
            }
        }
        let Some(nu) = self.homogeneous(x)? else {
            return Ok(x.clone());
        };
        self.check_weight(&nu)?;
        let span = self.complement_span(indices, &nu, side)?;
        if span.is_empty() {
            return Ok(x.clone());
        }
        let gram: Vec<Vec<RationalFn>> = self
            .word_gram(&span)
            .into_iter()
            .map(|row| row.into_iter().map(RationalFn::from).collect())
            .collect();
        let rhs = self.pairings(x, &span);
        let coords = linalg::solve(&gram, &rhs, self.parallel).ok_or(Error::InconsistentSystem)?;
        let mut out = x.clone();
        for (w, c) in span.into_iter().zip(coords) {
            out.add_term(w, -c);
        }
        Ok(out)
    }

    /// Sweeps every weight of height at most `h` and reports the dimensions.
    pub fn dims_up_to(&self, h: i64) -> Result<Vec<WeightSpaceReport>> {
        if h > self.max_height {
            return Err(Error::ResourceLimit {
                height: h,
                bound: self.max_height,
            });
        }
        let mut out = Vec::new();
        for height in 0..=h {
            for nu in Weight::all_of_height(self.datum.rank(), height) {
                out.push(self.weight_space(&nu)?.report());
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}
