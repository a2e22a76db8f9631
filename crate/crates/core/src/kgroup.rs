//! A Grothendieck-group model for a rank-2 piece `(i, j)` of a folded quiver.
//!
//! Classes are formal `Z[v, v^-1]`-combinations of two kinds of symbols:
//!
//! * `I(m, p)`, the pushforward class attached to the stratum `p` of the
//!   representations of dimension `m alpha_i + alpha_j`, which `lambda` sends
//!   to `theta_i^(m-p) theta_j theta_i^(p)`;
//! * `E(m)`, the class of the constant sheaf on the open stratum, without
//!   any shift.
//!
//! `N = -a_ij` is read off the folded Cartan matrix. The constant sheaf
//! shifted by `v_i^{-mN}` is the object that resolves into `I`-classes, so
//! `lambda(v_i^{-mN} E(m)) = f(i,j;m)` when `i` is a sink and
//! `f'(i,j;m)` when `i` is a source. Reflection at `i` swaps the two sides
//! and sends `E(m)` to `v_i^{(m-m')N} E'(m')` with `m' = N - m`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::braid::{f_gen, f_gen_prime, ti_apply};
use crate::cartan::CartanDatum;
use crate::error::{Error, Result};
use crate::falg::Algebra;
use crate::freealg::{same_datum, Element, ElementJson, Word};
use crate::scalars::{quantum_factorial, LaurentPoly, RationalFn};

/// Whether the orbit `i` is a sink or a source of the quiver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Sink,
    Source,
}

impl Side {
    pub fn flipped(self) -> Side {
        match self {
            Side::Sink => Side::Source,
            Side::Source => Side::Sink,
        }
    }
}

#[derive(Clone, Debug)]
pub struct KContext {
    datum: Arc<CartanDatum>,
    i: usize,
    j: usize,
    n: i64,
    side: Side,
}

impl PartialEq for KContext {
    fn eq(&self, other: &Self) -> bool {
        same_datum(&self.datum, &other.datum)
            && (self.i, self.j, self.side) == (other.i, other.j, other.side)
    }
}

impl Eq for KContext {}

impl KContext {
    pub fn new(datum: Arc<CartanDatum>, i: usize, j: usize, side: Side) -> Result<Self> {
        datum.check_index(i)?;
        datum.check_index(j)?;
        if i == j {
            return Err(Error::InvalidInput(format!(
                "context needs two distinct indices, got {i} twice"
            )));
        }
        let n = -datum.a(i, j);
        Ok(Self {
            datum,
            i,
            j,
            n,
            side,
        })
    }

    pub fn datum(&self) -> &Arc<CartanDatum> {
        &self.datum
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    /// `N = -a_ij`.
    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// The same pair after reflecting the quiver at `i`.
    pub fn reflected(&self) -> KContext {
        KContext {
            side: self.side.flipped(),
            ..self.clone()
        }
    }

    /// `v_i^k`.
    fn vi(&self, k: i64) -> LaurentPoly {
        LaurentPoly::v_pow(self.datum.eps(self.i) * k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum KSymbol {
    I { m: i64, p: i64 },
    E { m: i64 },
}

impl fmt::Display for KSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KSymbol::I { m, p } => write!(f, "I({m},{p})"),
            KSymbol::E { m } => write!(f, "E({m})"),
        }
    }
}

/// A `Z[v, v^-1]`-combination of symbols over one context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KClass {
    context: KContext,
    combo: BTreeMap<KSymbol, LaurentPoly>,
}

impl KClass {
    pub fn zero(context: &KContext) -> Self {
        Self {
            context: context.clone(),
            combo: BTreeMap::new(),
        }
    }

    /// The class of a single symbol; `0 <= p <= m` for `I`, `m >= 0` for `E`.
    pub fn symbol(context: &KContext, sym: KSymbol) -> Result<Self> {
        match sym {
            KSymbol::I { m, p } if m < 0 || p < 0 || p > m => {
                return Err(Error::UnsupportedSymbol(format!("{sym} needs 0 <= p <= m")));
            }
            KSymbol::E { m } if m < 0 => {
                return Err(Error::UnsupportedSymbol(format!("{sym} needs m >= 0")));
            }
            _ => {}
        }
        let mut k = Self::zero(context);
        k.combo.insert(sym, LaurentPoly::one());
        Ok(k)
    }

    pub fn context(&self) -> &KContext {
        &self.context
    }

    pub fn terms(&self) -> &BTreeMap<KSymbol, LaurentPoly> {
        &self.combo
    }

    pub fn is_zero(&self) -> bool {
        self.combo.is_empty()
    }

    fn add_term(&mut self, sym: KSymbol, c: LaurentPoly) {
        let entry = self.combo.entry(sym).or_default();
        *entry += &c;
        if entry.is_zero() {
            self.combo.remove(&sym);
        }
    }

    pub fn checked_add(&self, other: &KClass) -> Result<KClass> {
        if self.context != other.context {
            return Err(Error::ContextMismatch);
        }
        let mut out = self.clone();
        for (s, c) in &other.combo {
            out.add_term(*s, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &LaurentPoly) -> KClass {
        let mut out = KClass::zero(&self.context);
        if !c.is_zero() {
            for (s, x) in &self.combo {
                out.combo.insert(*s, x * c);
            }
        }
        out
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.combo.is_empty() {
            return write!(f, "0");
        }
        for (k, (s, c)) in self.combo.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{s}")?;
            } else {
                write!(f, "({c})·{s}")?;
            }
        }
        Ok(())
    }
}

/// `theta_i^(a) theta_j theta_i^(b)`.
fn sandwich(ctx: &KContext, a: i64, b: i64) -> Result<Element> {
    let eps = ctx.datum.eps(ctx.i);
    let letters = std::iter::repeat_n(ctx.i, a as usize)
        .chain([ctx.j])
        .chain(std::iter::repeat_n(ctx.i, b as usize));
    let den = &quantum_factorial(a, eps)? * &quantum_factorial(b, eps)?;
    Ok(Element::monomial(
        &ctx.datum,
        Word::new(letters),
        RationalFn::new(LaurentPoly::one(), den)?,
    ))
}

/// The map `lambda` into `f`: `I(m,p) -> theta_i^(m-p) theta_j theta_i^(p)`
/// and `E(m) -> v_i^{mN} f(i,j;m)` (sink) or `v_i^{mN} f'(i,j;m)` (source).
pub fn lambda_class(k: &KClass) -> Result<Element> {
    let ctx = &k.context;
    let mut out = Element::zero(&ctx.datum);
    for (sym, c) in &k.combo {
        let (image, shift) = match *sym {
            KSymbol::I { m, p } => (sandwich(ctx, m - p, p)?, LaurentPoly::one()),
            KSymbol::E { m } => {
                let g = match ctx.side {
                    Side::Sink => f_gen(&ctx.datum, ctx.i, ctx.j, m)?,
                    Side::Source => f_gen_prime(&ctx.datum, ctx.i, ctx.j, m)?,
                };
                (g, ctx.vi(m * ctx.n))
            }
        };
        out = out.checked_add(&image.scale(&RationalFn::from(c * &shift)))?;
    }
    Ok(out)
}

/// The class `v_i^{-mN} E(m)` written in `I`-classes:
/// `sum_p (-1)^p v_i^{-p(1+N-m)} I(m, m-p)` on the sink side and the same sum
/// over `I(m, p)` on the source side.
#[allow(non_snake_case)]
pub fn resolve_E(ctx: &KContext, m: i64) -> Result<KClass> {
    if m < 0 || m > ctx.n {
        return Err(Error::InvalidInput(format!(
            "m = {m} is outside 0..={}",
            ctx.n
        )));
    }
    let mut out = KClass::zero(ctx);
    for p in 0..=m {
        let sign = if p % 2 == 0 { 1 } else { -1 };
        let c = ctx.vi(-p * (1 + ctx.n - m)).scale(&sign.into());
        let sym = match ctx.side {
            Side::Sink => KSymbol::I { m, p: m - p },
            Side::Source => KSymbol::I { m, p },
        };
        out.add_term(sym, c);
    }
    Ok(out)
}

/// Transport along the reflection at `i`: `E(m) -> v_i^{(m-m')N} E'(m')`
/// with `m' = N - m`, into the context with the opposite side.
pub fn omega_reflect(k: &KClass) -> Result<KClass> {
    let ctx = &k.context;
    let target = ctx.reflected();
    let mut out = KClass::zero(&target);
    for (sym, c) in &k.combo {
        match *sym {
            KSymbol::E { m } if m <= ctx.n => {
                let m2 = ctx.n - m;
                out.add_term(KSymbol::E { m: m2 }, c * &ctx.vi((m - m2) * ctx.n));
            }
            other => {
                return Err(Error::UnsupportedSymbol(format!(
                    "{other} is not transported by the reflection (N = {})",
                    ctx.n
                )))
            }
        }
    }
    Ok(out)
}

/// Both paths around the square for one `m`.
#[derive(Clone, Debug)]
pub struct SquareReport {
    pub m: i64,
    /// `T_i(lambda(v_i^{-mN} E(m)))`.
    pub lhs: Element,
    /// `lambda(omega(v_i^{-mN} E(m)))`.
    pub rhs: Element,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SquareJson {
    pub lhs: ElementJson,
    pub rhs: ElementJson,
    pub equal: bool,
}

impl SquareReport {
    pub fn to_json(&self) -> SquareJson {
        SquareJson {
            lhs: self.lhs.to_json(),
            rhs: self.rhs.to_json(),
            equal: self.equal,
        }
    }
}

/// Checks that `T_i` after `lambda` agrees with `lambda` after the
/// reflection, on the class `v_i^{-mN} E(m)` of a sink-side context.
pub fn verify_square(alg: &Algebra, ctx: &KContext, m: i64) -> Result<SquareReport> {
    if !same_datum(alg.datum(), &ctx.datum) {
        return Err(Error::DatumMismatch);
    }
    if ctx.side != Side::Sink {
        return Err(Error::InvalidInput(
            "the square starts from a context where i is a sink".into(),
        ));
    }
    if m < 0 || m > ctx.n {
        return Err(Error::InvalidInput(format!(
            "m = {m} is outside 0..={}",
            ctx.n
        )));
    }
    let x = KClass::symbol(ctx, KSymbol::E { m })?.scale(&ctx.vi(-m * ctx.n));
    let lhs = ti_apply(alg, ctx.i, &lambda_class(&x)?)?.image;
    let rhs = lambda_class(&omega_reflect(&x)?)?;
    let equal = alg.equal_in_f(&lhs, &rhs)?;
    Ok(SquareReport { m, lhs, rhs, equal })
}
