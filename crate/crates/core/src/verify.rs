//! Bundled self-checks: the Serre relations, the projections, the braid
//! symmetries and the Grothendieck-group square, run against one datum.
//!
//! Reports are deterministic. Random samples come from a fixed seed and
//! timings are handed to a caller-supplied callback rather than stored in
//! the report.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::braid::{
    f_gen, f_gen_prime, kernel_image_check, serre_relator, ti_apply, ti_inverse_apply,
};
use crate::cartan::{CartanDatum, Weight};
use crate::error::{Error, Result};
use crate::falg::Algebra;
use crate::freealg::{Element, Word};
use crate::kgroup::{verify_square, KContext, Side};
use crate::quiver::{unfold, QuiverAut};
use crate::scalars::{LaurentPoly, RationalFn};

const SEED: u64 = 0x5eed_f01d;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Serre,
    Projections,
    Braid,
    Ksquare,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::Serre,
        Suite::Projections,
        Suite::Braid,
        Suite::Ksquare,
    ];

    /// Parses a suite name; `all` expands to every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            Ok(Suite::ALL.to_vec())
        } else {
            Ok(vec![s.parse()?])
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "serre" => Ok(Suite::Serre),
            "projections" => Ok(Suite::Projections),
            "braid" => Ok(Suite::Braid),
            "ksquare" => Ok(Suite::Ksquare),
            other => Err(Error::InvalidInput(format!("unknown suite {other:?}"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Serre => "serre",
            Suite::Projections => "projections",
            Suite::Braid => "braid",
            Suite::Ksquare => "ksquare",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
    /// A serialized counterexample when the check fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub datum: CartanDatum,
    pub max_height: i64,
    pub suites: Vec<Suite>,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
}

/// What to verify: a datum, and optionally the quiver it was folded from
/// (used by the K-group suite to decide sinks and sources).
pub struct VerifyInput {
    pub datum: Arc<CartanDatum>,
    pub quiver: Option<QuiverAut>,
}

struct Runner<'a> {
    alg: Algebra,
    quiver: Option<QuiverAut>,
    rng: ChaCha8Rng,
    checks: Vec<Check>,
    timer: &'a mut dyn FnMut(&str, Duration),
}

/// Runs the requested suites in a fixed order.
pub fn run(
    input: VerifyInput,
    suites: &[Suite],
    max_height: i64,
    timer: &mut dyn FnMut(&str, Duration),
) -> Result<VerifyReport> {
    let mut suites = suites.to_vec();
    suites.sort();
    suites.dedup();
    let datum = input.datum.clone();
    let mut r = Runner {
        alg: Algebra::from_arc(input.datum).with_max_height(max_height),
        quiver: input.quiver,
        rng: ChaCha8Rng::seed_from_u64(SEED),
        checks: Vec::new(),
        timer,
    };
    for &suite in &suites {
        let start = Instant::now();
        match suite {
            Suite::Serre => r.serre()?,
            Suite::Projections => r.projections()?,
            Suite::Braid => r.braid()?,
            Suite::Ksquare => r.ksquare()?,
        }
        (r.timer)(&suite.to_string(), start.elapsed());
    }
    let passed = r.checks.iter().filter(|c| c.pass).count();
    let failed = r.checks.len() - passed;
    Ok(VerifyReport {
        datum: (*datum).clone(),
        max_height,
        suites,
        checks: r.checks,
        passed,
        failed,
        pass: failed == 0,
    })
}

/// A random homogeneous element of weight `nu` with up to `max_terms` terms
/// and small Laurent-monomial coefficients.
pub fn random_element(
    datum: &Arc<CartanDatum>,
    nu: &Weight,
    max_terms: usize,
    rng: &mut impl Rng,
) -> Element {
    let words = Word::all_of_weight(nu);
    let count = rng.gen_range(1..=max_terms.max(1)).min(words.len());
    let chosen: Vec<&Word> = words.choose_multiple(rng, count).collect();
    let mut terms = Vec::with_capacity(count);
    for w in chosen {
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-3i64..=3);
        }
        let e = rng.gen_range(-2i64..=2);
        terms.push((w.clone(), RationalFn::from(LaurentPoly::monomial(c, e))));
    }
    Element::from_terms(datum, terms).expect("letters are in range")
}

/// A uniformly chosen weight of the given height.
pub fn random_weight(rank: usize, height: i64, rng: &mut impl Rng) -> Weight {
    let all = Weight::all_of_height(rank, height);
    all.choose(rng)
        .expect("some weight of every height")
        .clone()
}

fn json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

impl Runner<'_> {
    fn datum(&self) -> Arc<CartanDatum> {
        self.alg.datum().clone()
    }

    fn push(
        &mut self,
        suite: Suite,
        name: String,
        pass: bool,
        detail: Option<Value>,
        witness: Option<Value>,
    ) {
        self.checks.push(Check {
            suite,
            name,
            pass,
            detail,
            witness: if pass { None } else { witness },
        });
    }

    fn serre(&mut self) -> Result<()> {
        let d = self.datum();
        for i in 0..d.rank() {
            for j in 0..d.rank() {
                if i == j {
                    continue;
                }
                let rel = serre_relator(&d, i, j)?;
                let start = Instant::now();
                let pass = self.alg.is_zero_in_f(&rel)?;
                (self.timer)(&format!("serre({i},{j})"), start.elapsed());
                self.push(
                    Suite::Serre,
                    format!("serre({i},{j})"),
                    pass,
                    None,
                    Some(json(&rel.to_json())),
                );
            }
        }
        Ok(())
    }

    fn index_sets(&self) -> Vec<Vec<usize>> {
        let n = self.alg.datum().rank();
        if n <= 3 {
            (1..1usize << n)
                .map(|mask| (0..n).filter(|k| mask >> k & 1 == 1).collect())
                .collect()
        } else {
            let mut sets: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
            sets.push((0..n).collect());
            sets
        }
    }

    fn projections(&mut self) -> Result<()> {
        let d = self.datum();
        let top = self.alg.max_height().min(4);
        for set in self.index_sets() {
            let mut witness = None;
            let samples = 8;
            for _ in 0..samples {
                let h = self.rng.gen_range(1..=top);
                let nu = random_weight(d.rank(), h, &mut self.rng);
                let x = random_element(&d, &nu, 4, &mut self.rng);
                let p = self.alg.proj_left(&set, &x)?;
                let residual = &x - &p;
                let mut ok = self.alg.pair(&p, &residual)?.is_zero();
                for &i in &set {
                    ok &= self.alg.membership_left(i, &p)?;
                }
                ok &= self.alg.equal_in_f(&self.alg.proj_left(&set, &p)?, &p)?;
                if set.len() == 1 {
                    let q = self.alg.proj_right(set[0], &x)?;
                    ok &= self.alg.membership_right(set[0], &q)?;
                    ok &= self.alg.pair(&q, &(&x - &q))?.is_zero();
                    ok &= self.alg.equal_in_f(&self.alg.proj_right(set[0], &q)?, &q)?;
                }
                if !ok {
                    witness = Some(json(&x.to_json()));
                    break;
                }
            }
            let name = format!("projection{set:?}");
            let pass = witness.is_none();
            self.push(
                Suite::Projections,
                name,
                pass,
                Some(json(&samples)),
                witness,
            );
        }
        Ok(())
    }

    fn braid(&mut self) -> Result<()> {
        let d = self.datum();
        let n = d.rank();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let big_n = -d.a(i, j);
                for m in 0..=big_n {
                    let x = f_gen(&d, i, j, m)?;
                    let expected = f_gen_prime(&d, i, j, big_n - m)?;
                    let forward = ti_apply(&self.alg, i, &x)?.image;
                    let backward =
                        ti_inverse_apply(&self.alg, i, &f_gen_prime(&d, i, j, m)?)?.image;
                    let pass = self.alg.equal_in_f(&forward, &expected)?
                        && self
                            .alg
                            .equal_in_f(&backward, &f_gen(&d, i, j, big_n - m)?)?;
                    self.push(
                        Suite::Braid,
                        format!("generator_law({i},{j};{m})"),
                        pass,
                        None,
                        Some(json(&forward.to_json())),
                    );
                }
            }
        }
        let top = self.alg.max_height().min(4);
        for i in 0..n {
            let mut checked = 0usize;
            let mut skipped = 0usize;
            let mut witness = None;
            for h in 1..=top {
                for nu in Weight::all_of_height(n, h) {
                    let image = d.reflect_weight(i, &nu)?;
                    if image.height() > self.alg.max_height() {
                        skipped += 1;
                        continue;
                    }
                    for inverse in [false, true] {
                        let r = kernel_image_check(&self.alg, i, &nu, inverse)?;
                        checked += 1;
                        if !r.vanishing && witness.is_none() {
                            witness = Some(json(&r));
                        }
                    }
                }
            }
            let pass = witness.is_none();
            let detail = serde_json::json!({ "checked": checked, "skipped": skipped });
            self.push(
                Suite::Braid,
                format!("well_defined({i})"),
                pass,
                Some(detail),
                witness,
            );
        }
        for i in 0..n {
            let mut witness = None;
            let samples = 6;
            for _ in 0..samples {
                let h = self.rng.gen_range(1..=top.min(3));
                let nu = random_weight(n, h, &mut self.rng);
                if d.reflect_weight(i, &nu)?.height() > self.alg.max_height() {
                    continue;
                }
                let x = self
                    .alg
                    .proj_left(&[i], &random_element(&d, &nu, 3, &mut self.rng))?;
                let y = ti_apply(&self.alg, i, &x)?.image;
                let back = ti_inverse_apply(&self.alg, i, &y)?.image;
                if !self.alg.equal_in_f(&back, &x)? {
                    witness = Some(json(&x.to_json()));
                    break;
                }
            }
            let pass = witness.is_none();
            self.push(
                Suite::Braid,
                format!("inverse({i})"),
                pass,
                Some(json(&samples)),
                witness,
            );
        }
        Ok(())
    }

    /// Every ordered pair of orbits `(i, j)` with `N <= 3` in which `i` is a
    /// sink or a source; sources are handled by reflecting first, which does
    /// not change the folded datum.
    fn ksquare(&mut self) -> Result<()> {
        let d = self.datum();
        let quiver = match &self.quiver {
            Some(q) => q.clone(),
            None => unfold(&d, &Default::default()),
        };
        for i in 0..d.rank() {
            let sink = quiver.orbit_is_sink(i)?;
            let source = quiver.orbit_is_source(i)?;
            if !sink && !source {
                continue;
            }
            for j in 0..d.rank() {
                if i == j || -d.a(i, j) > 3 {
                    continue;
                }
                let ctx = KContext::new(d.clone(), i, j, Side::Sink)?;
                for m in 0..=ctx.n() {
                    let start = Instant::now();
                    let r = verify_square(&self.alg, &ctx, m)?;
                    (self.timer)(&format!("square({i},{j};{m})"), start.elapsed());
                    let detail = serde_json::json!({ "reflected": !sink });
                    let witness =
                        serde_json::json!({ "lhs": r.lhs.to_json(), "rhs": r.rhs.to_json() });
                    self.push(
                        Suite::Ksquare,
                        format!("square({i},{j};{m})"),
                        r.equal,
                        Some(detail),
                        Some(witness),
                    );
                }
            }
        }
        Ok(())
    }
}
