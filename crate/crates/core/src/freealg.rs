//! The free algebra on the generators `theta_i` over `Q(v)`, the twisted
//! derivations `_i r`, and Lusztig's bilinear form on words.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::cartan::{CartanDatum, Weight};
use crate::error::{Error, Result};
use crate::scalars::{quantum_factorial, LaurentPoly, RationalFn};

/// A monomial `theta_{i_1} ... theta_{i_k}`, compared lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn new(letters: impl IntoIterator<Item = usize>) -> Self {
        Self(
            letters
                .into_iter()
                .map(|i| u8::try_from(i).expect("generator index fits in u8"))
                .collect(),
        )
    }

    pub fn letters(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.0.iter().map(|&b| b as usize)
    }

    pub(crate) fn bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self, rank: usize) -> Weight {
        let mut c = vec![0i64; rank];
        for &b in &self.0 {
            c[b as usize] += 1;
        }
        Weight::new(c)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `theta_i * self`.
    pub fn prepend(&self, i: usize) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(i as u8);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    /// `self * theta_i`.
    pub fn append(&self, i: usize) -> Word {
        let mut v = self.0.clone();
        v.push(i as u8);
        Word(v)
    }

    pub(crate) fn without(&self, pos: usize) -> Word {
        let mut v = self.0.clone();
        v.remove(pos);
        Word(v)
    }

    /// All words of weight `nu`, in lexicographic order.
    pub fn all_of_weight(nu: &Weight) -> Vec<Word> {
        fn rec(left: &mut Vec<i64>, cur: &mut Vec<u8>, out: &mut Vec<Word>, remaining: i64) {
            if remaining == 0 {
                out.push(Word(cur.clone()));
                return;
            }
            for i in 0..left.len() {
                if left[i] > 0 {
                    left[i] -= 1;
                    cur.push(i as u8);
                    rec(left, cur, out, remaining - 1);
                    cur.pop();
                    left[i] += 1;
                }
            }
        }
        let mut out = Vec::new();
        if !nu.is_nonnegative() {
            return out;
        }
        let mut left = nu.coords().to_vec();
        rec(&mut left, &mut Vec::new(), &mut out, nu.height());
        out
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, b) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "·")?;
            }
            write!(f, "θ{b}")?;
        }
        Ok(())
    }
}

/// A finite `Q(v)`-linear combination of words over a fixed Cartan datum.
#[derive(Clone)]
pub struct Element {
    datum: Arc<CartanDatum>,
    terms: BTreeMap<Word, RationalFn>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        same_datum(&self.datum, &other.datum) && self.terms == other.terms
    }
}

impl Eq for Element {}

pub(crate) fn same_datum(a: &Arc<CartanDatum>, b: &Arc<CartanDatum>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Element {
    pub fn zero(datum: &Arc<CartanDatum>) -> Self {
        Self {
            datum: datum.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(datum: &Arc<CartanDatum>) -> Self {
        Self::monomial(datum, Word::empty(), RationalFn::one())
    }

    pub fn monomial(datum: &Arc<CartanDatum>, word: Word, coeff: RationalFn) -> Self {
        let mut e = Self::zero(datum);
        e.add_term(word, coeff);
        e
    }

    /// Builds an element from `(word, coefficient)` pairs, validating letters.
    pub fn from_terms(
        datum: &Arc<CartanDatum>,
        terms: impl IntoIterator<Item = (Word, RationalFn)>,
    ) -> Result<Self> {
        let mut e = Self::zero(datum);
        for (w, c) in terms {
            for l in w.letters() {
                datum.check_index(l)?;
            }
            e.add_term(w, c);
        }
        Ok(e)
    }

    pub fn generator(datum: &Arc<CartanDatum>, i: usize) -> Result<Self> {
        datum.check_index(i)?;
        Ok(Self::monomial(datum, Word::new([i]), RationalFn::one()))
    }

    /// `theta_i^(n) = theta_i^n / [n]_{v_i}!`.
    pub fn divided_power(datum: &Arc<CartanDatum>, i: usize, n: i64) -> Result<Self> {
        datum.check_index(i)?;
        let fact = quantum_factorial(n, datum.eps(i))?;
        let coeff = RationalFn::new(LaurentPoly::one(), fact)?;
        Ok(Self::monomial(
            datum,
            Word::new(std::iter::repeat_n(i, n as usize)),
            coeff,
        ))
    }

    pub fn datum(&self) -> &Arc<CartanDatum> {
        &self.datum
    }

    pub fn terms(&self) -> &BTreeMap<Word, RationalFn> {
        &self.terms
    }

    pub fn coeff(&self, w: &Word) -> RationalFn {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn add_term(&mut self, w: Word, c: RationalFn) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_datum(&self, other: &Element) -> Result<()> {
        if same_datum(&self.datum, &other.datum) {
            Ok(())
        } else {
            Err(Error::DatumMismatch)
        }
    }

    pub fn checked_add(&self, other: &Element) -> Result<Element> {
        self.check_datum(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Element) -> Result<Element> {
        self.checked_add(&-other)
    }

    pub fn scale(&self, c: &RationalFn) -> Element {
        if c.is_zero() {
            return Element::zero(&self.datum);
        }
        Element {
            datum: self.datum.clone(),
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    /// The concatenation product, extended bilinearly.
    pub fn multiply(&self, other: &Element) -> Result<Element> {
        self.check_datum(other)?;
        let mut out = Element::zero(&self.datum);
        for (w, a) in &self.terms {
            for (u, b) in &other.terms {
                out.add_term(w.concat(u), a * b);
            }
        }
        Ok(out)
    }

    /// Distinct weights of the words present.
    pub fn weights(&self) -> BTreeSet<Weight> {
        let r = self.datum.rank();
        self.terms.keys().map(|w| w.weight(r)).collect()
    }

    /// The common weight of all terms; `None` for the zero element.
    pub fn homogeneous_weight(&self) -> Result<Option<Weight>> {
        let ws = self.weights();
        match ws.len() {
            0 => Ok(None),
            1 => Ok(ws.into_iter().next()),
            _ => Err(Error::Inhomogeneous),
        }
    }

    /// Splits into homogeneous components.
    pub fn components(&self) -> BTreeMap<Weight, Element> {
        let r = self.datum.rank();
        let mut out: BTreeMap<Weight, Element> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.weight(r))
                .or_insert_with(|| Element::zero(&self.datum))
                .terms
                .insert(w.clone(), c.clone());
        }
        out
    }

    /// The twisted derivation `_i r`:
    /// `_i r(theta_j) = delta_ij` and `_i r(xy) = _i r(x) y + v^{(|x|, alpha_i)} x _i r(y)`.
    pub fn i_derivation(&self, i: usize) -> Result<Element> {
        self.datum.check_index(i)?;
        let mut out = Element::zero(&self.datum);
        for (w, c) in &self.terms {
            let mut prefix_pairing = 0i64;
            for (pos, l) in w.letters().enumerate() {
                if l == i {
                    out.add_term(w.without(pos), c.shift(prefix_pairing));
                }
                prefix_pairing += self.datum.root_pairing(l, i);
            }
        }
        Ok(out)
    }

    /// Canonical JSON: `{"terms": [{"word": [...], "coeff": {...}}, ...]}`.
    pub fn to_json(&self) -> ElementJson {
        ElementJson {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| TermJson {
                    word: w.letters().collect(),
                    coeff: c.clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(datum: &Arc<CartanDatum>, json: &ElementJson) -> Result<Element> {
        Element::from_terms(
            datum,
            json.terms
                .iter()
                .map(|t| (Word::new(t.word.iter().copied()), t.coeff.clone())),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub word: Vec<usize>,
    pub coeff: RationalFn,
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "[{c}]·{w}")?;
            }
        }
        Ok(())
    }
}

impl Add<&Element> for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.checked_add(rhs)
            .expect("datum mismatch in element addition")
    }
}

impl Sub<&Element> for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.checked_sub(rhs)
            .expect("datum mismatch in element subtraction")
    }
}

impl Mul<&Element> for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        self.multiply(rhs)
            .expect("datum mismatch in element product")
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element {
            datum: self.datum.clone(),
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

/// `(theta_i, theta_i) = 1 / (1 - v_i^-2)`.
pub fn generator_norm(datum: &CartanDatum, i: usize) -> RationalFn {
    let e = datum.eps(i);
    RationalFn::new(
        LaurentPoly::v_pow(2 * e),
        &LaurentPoly::v_pow(2 * e) - &LaurentPoly::one(),
    )
    .expect("nonzero denominator")
}

/// The product of generator norms over the letters of any word of weight `nu`.
pub fn weight_norm(datum: &CartanDatum, nu: &Weight) -> RationalFn {
    let mut num_exp = 0;
    let mut den = LaurentPoly::one();
    for i in 0..datum.rank() {
        let e = datum.eps(i);
        let k = nu.get(i);
        num_exp += 2 * e * k;
        let factor = &LaurentPoly::v_pow(2 * e) - &LaurentPoly::one();
        den = &den * &factor.pow(k as u32);
    }
    RationalFn::new(LaurentPoly::v_pow(num_exp), den).expect("nonzero denominator")
}

/// An element with coefficients in `Z[v, v^-1]`, used inside the form
/// computations after denominators have been cleared.
pub(crate) type IntegralTerms = HashMap<Word, LaurentPoly>;

impl Element {
    /// Writes `self = X / den` with `X` integral; `den` is the lcm of the
    /// coefficient denominators.
    pub(crate) fn clear_denominators(&self) -> (IntegralTerms, LaurentPoly) {
        let mut den = LaurentPoly::one();
        for c in self.terms.values() {
            let d = c.denom();
            if d.is_one() || d == &den {
                continue;
            }
            let g = LaurentPoly::from_coeffs(
                0,
                crate::scalars::poly::gcd(den.stripped(), d.stripped()),
            );
            den = &den * &d.div_exact(&g).expect("gcd divides");
        }
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| {
                let cof = den.div_exact(c.denom()).expect("lcm is a multiple");
                (w.clone(), c.numer() * &cof)
            })
            .collect();
        (terms, den)
    }
}

/// Lusztig's form on words.
///
/// For two words of weight `nu`, `(w, u) = weight_norm(nu) * P(w, u)` with
/// `P(w, u)` in `Z[v, v^-1]`. `P` is computed by peeling the letters of `w`
/// from the left, `(theta_i w', y) = (theta_i, theta_i) (w', _i r(y))`, so a
/// pairing is a chain of derivations applied to the second argument. Target
/// words sharing a prefix share the chain. Word-pair results are memoized;
/// the cache is safe to share between threads.
pub struct WordForm {
    datum: Arc<CartanDatum>,
    memo: RwLock<HashMap<(Word, Word), LaurentPoly>>,
}

impl WordForm {
    pub fn new(datum: Arc<CartanDatum>) -> Self {
        Self {
            datum,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn datum(&self) -> &Arc<CartanDatum> {
        &self.datum
    }

    /// Number of memoized word pairs.
    pub fn cache_len(&self) -> usize {
        self.memo.read().len()
    }

    /// The integral part `P(w, u)`; zero when the weights differ.
    pub fn pair_words_integral(&self, w: &Word, u: &Word) -> LaurentPoly {
        if w.len() != u.len() {
            return LaurentPoly::zero();
        }
        let key = (w.clone(), u.clone());
        if let Some(p) = self.memo.read().get(&key) {
            return p.clone();
        }
        let y: IntegralTerms = HashMap::from([(u.clone(), LaurentPoly::one())]);
        let p = self.dual(&y, std::slice::from_ref(w)).pop().unwrap();
        self.memo.write().insert(key, p.clone());
        p
    }

    pub fn pair_words(&self, w: &Word, u: &Word) -> RationalFn {
        let p = self.pair_words_integral(w, u);
        if p.is_zero() {
            return RationalFn::zero();
        }
        weight_norm(&self.datum, &w.weight(self.datum.rank())).mul_laurent(&p)
    }

    /// `_i r` on integral terms.
    pub(crate) fn derive(&self, y: &IntegralTerms, i: usize) -> IntegralTerms {
        let mut out: IntegralTerms = HashMap::new();
        let i8 = i as u8;
        for (w, c) in y {
            let mut prefix_pairing = 0i64;
            for (pos, &l) in w.bytes().iter().enumerate() {
                if l == i8 {
                    let term = c.shift(prefix_pairing);
                    match out.entry(w.without(pos)) {
                        std::collections::hash_map::Entry::Vacant(e) => {
                            e.insert(term);
                        }
                        std::collections::hash_map::Entry::Occupied(mut e) => {
                            *e.get_mut() += &term;
                        }
                    }
                }
                prefix_pairing += self.datum.root_pairing(l as usize, i);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// `P(t, y)` for every target word `t`, where `y` is integral.
    pub(crate) fn dual(&self, y: &IntegralTerms, targets: &[Word]) -> Vec<LaurentPoly> {
        let mut out = vec![LaurentPoly::zero(); targets.len()];
        if y.is_empty() || targets.is_empty() {
            return out;
        }
        let rank = self.datum.rank();
        let y_weight = y.keys().next().unwrap().weight(rank);
        let mut order: Vec<usize> = (0..targets.len())
            .filter(|&k| targets[k].weight(rank) == y_weight)
            .collect();
        order.sort_by(|&a, &b| targets[a].cmp(&targets[b]));
        self.dual_rec(y, targets, &order, 0, &mut out);
        out
    }

    fn dual_rec(
        &self,
        y: &IntegralTerms,
        targets: &[Word],
        group: &[usize],
        depth: usize,
        out: &mut [LaurentPoly],
    ) {
        if group.is_empty() || y.is_empty() {
            return;
        }
        if depth == targets[group[0]].len() {
            let c = y.get(&Word::empty()).cloned().unwrap_or_default();
            for &k in group {
                out[k] = c.clone();
            }
            return;
        }
        let mut start = 0;
        while start < group.len() {
            let letter = targets[group[start]].bytes()[depth];
            let end = start
                + group[start..]
                    .iter()
                    .take_while(|&&k| targets[k].bytes()[depth] == letter)
                    .count();
            let derived = self.derive(y, letter as usize);
            self.dual_rec(&derived, targets, &group[start..end], depth + 1, out);
            start = end;
        }
    }

    /// `(x, y)`, summed over homogeneous components.
    pub fn pair(&self, x: &Element, y: &Element) -> Result<RationalFn> {
        if !same_datum(x.datum(), &self.datum) || !same_datum(y.datum(), &self.datum) {
            return Err(Error::DatumMismatch);
        }
        let ys = y.components();
        let mut total = RationalFn::zero();
        for (nu, xc) in x.components() {
            let Some(yc) = ys.get(&nu) else { continue };
            let inner = self.pair_integral_homogeneous(&xc, yc);
            if !inner.is_zero() {
                total += &(&inner * &weight_norm(&self.datum, &nu));
            }
        }
        Ok(total)
    }

    /// `sum_{w,u} x_w y_u P(w, u)` for same-weight homogeneous inputs.
    pub(crate) fn pair_integral_homogeneous(&self, x: &Element, y: &Element) -> RationalFn {
        let (yi, yden) = y.clear_denominators();
        let targets: Vec<Word> = x.terms().keys().cloned().collect();
        let vals = self.dual(&yi, &targets);
        let mut total = RationalFn::zero();
        for ((_, cw), p) in x.terms().iter().zip(vals) {
            if !p.is_zero() {
                total += &cw.mul_laurent(&p);
            }
        }
        if yden.is_one() {
            total
        } else {
            &total / &RationalFn::from(yden)
        }
    }
}

/// Lusztig's form `(x, y)` with a fresh per-call cache.
pub fn pair(x: &Element, y: &Element) -> Result<RationalFn> {
    WordForm::new(x.datum().clone()).pair(x, y)
}
