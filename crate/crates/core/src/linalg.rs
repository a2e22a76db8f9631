//! Exact linear algebra over `Q(v)` via fraction-free elimination in `Z[v]`.
//!
//! Rows are first scaled by units and common denominators so that every
//! entry is a polynomial; Bareiss elimination then keeps every entry a minor
//! of the input, with exact divisions only. Back-substitution happens once
//! at the end, in `RationalFn`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::exec;
use crate::scalars::poly::{self, Coeffs};
use crate::scalars::{LaurentPoly, RationalFn};

/// Row echelon form produced by [`echelon`]. `rows[r]` has its leading
/// nonzero entry in column `pivots[r]`; rows past `pivots.len()` are zero.
pub(crate) struct Echelon {
    pub rows: Vec<Vec<Coeffs>>,
    pub pivots: Vec<usize>,
}

/// Fraction-free Gaussian elimination. Pivot columns are chosen greedily from
/// left to right, so they index the lexicographically first maximal set of
/// independent columns.
pub(crate) fn echelon(mut rows: Vec<Vec<Coeffs>>, parallel: bool) -> Echelon {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut prev: Coeffs = vec![1.into()];
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&k| !rows[k][c].is_empty()) else {
            continue;
        };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let lead = &pivot_row[c];
        exec::for_each_mut(parallel, tail, |row| {
            let factor = std::mem::take(&mut row[c]);
            for k in c + 1..n {
                let a = poly::mul(lead, &row[k]);
                let updated = if factor.is_empty() || pivot_row[k].is_empty() {
                    a
                } else {
                    poly::sub(&a, &poly::mul(&factor, &pivot_row[k]))
                };
                row[k] = if updated.is_empty() {
                    updated
                } else {
                    poly::div_exact(&updated, &prev).expect("Bareiss division is exact")
                };
            }
        });
        prev = rows[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    Echelon { rows, pivots }
}

/// Scales a row of rational functions into `Z[v]` by a nonzero factor.
pub(crate) fn clear_row(row: &[RationalFn]) -> Vec<Coeffs> {
    let mut lcm: Coeffs = vec![1.into()];
    for x in row {
        let d = x.denom().stripped();
        if poly::is_one(d) {
            continue;
        }
        let g = poly::gcd(&lcm, d);
        lcm = poly::mul(&lcm, &poly::div_exact(d, &g).expect("gcd divides"));
    }
    let lcm = LaurentPoly::from_coeffs(0, lcm);
    let scaled: Vec<LaurentPoly> = row
        .iter()
        .map(|x| {
            if x.is_zero() {
                LaurentPoly::zero()
            } else {
                let cofactor = lcm.div_exact(x.denom()).expect("lcm is a multiple");
                x.numer() * &cofactor
            }
        })
        .collect();
    laurent_row_to_poly(&scaled)
}

/// Multiplies a row of Laurent polynomials by a power of `v` making every
/// entry a polynomial with at least one nonzero constant term.
pub(crate) fn laurent_row_to_poly(row: &[LaurentPoly]) -> Vec<Coeffs> {
    let low = row
        .iter()
        .filter(|x| !x.is_zero())
        .map(LaurentPoly::low_exp)
        .min()
        .unwrap_or(0);
    row.iter()
        .map(|x| {
            if x.is_zero() {
                Vec::new()
            } else {
                let mut c = vec![Zero::zero(); (x.low_exp() - low) as usize];
                c.extend_from_slice(x.stripped());
                c
            }
        })
        .collect()
}

fn to_rf(p: &Coeffs) -> RationalFn {
    RationalFn::from(LaurentPoly::from_coeffs(0, p.clone()))
}

/// Rows reduced modulo one prime: `rows[r][c]` is a coefficient list in `t`.
type ReducedRows = Vec<Vec<Vec<u64>>>;

/// Rank of a matrix of Laurent polynomials, with its greedy pivot columns,
/// by exact fraction-free elimination. Reference for [`rank_and_pivots`].
#[cfg(test)]
pub(crate) fn rank_and_pivots_bareiss(
    rows: &[Vec<LaurentPoly>],
    parallel: bool,
) -> (usize, Vec<usize>) {
    let rows: Vec<Vec<Coeffs>> = rows.iter().map(|r| laurent_row_to_poly(r)).collect();
    let e = echelon(rows, parallel);
    (e.pivots.len(), e.pivots)
}

/// Rank of a matrix of Laurent polynomials, with its greedy pivot columns.
///
/// Exact, via evaluation. After shifting rows into `Z[v]`, every minor is a
/// polynomial of degree at most `D` (the sum of the row degrees) whose
/// coefficients are bounded by `B` (the product of the row L1 norms).
/// Reducing modulo a prime and evaluating at a point can only lower the rank
/// of each leading block of columns. A nonzero minor survives reduction
/// modulo at least one prime of any set whose product exceeds `B`, and then
/// is nonzero at one of any `D + 1` distinct points. So the pointwise maximum
/// of the prefix-rank profiles over all those evaluations is the exact
/// profile over `Q(v)`, from which the greedy pivots are read off.
pub(crate) fn rank_and_pivots(rows: &[Vec<LaurentPoly>], parallel: bool) -> (usize, Vec<usize>) {
    let polys: Vec<Vec<Coeffs>> = rows.iter().map(|r| laurent_row_to_poly(r)).collect();
    let nrows = polys.len();
    let ncols = polys.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 {
        return (0, Vec::new());
    }
    // (degree, bits of the L1 norm) of every nonzero row, largest first
    let mut row_degrees: Vec<usize> = Vec::new();
    let mut row_bits: Vec<u64> = Vec::new();
    for row in &polys {
        let norm: BigInt = row.iter().flatten().map(|x| x.abs()).sum();
        if !norm.is_zero() {
            row_degrees.push(
                row.iter()
                    .map(|c| c.len().saturating_sub(1))
                    .max()
                    .unwrap_or(0),
            );
            row_bits.push(norm.bits());
        }
    }
    row_degrees.sort_unstable_by(|a, b| b.cmp(a));
    row_bits.sort_unstable_by(|a, b| b.cmp(a));
    // Bounds for minors of size `k`: the `k` largest rows.
    let bounds = |k: usize| -> (u64, u64) {
        let d: usize = row_degrees.iter().take(k).sum();
        let bits: u64 = row_bits.iter().take(k).sum();
        (d as u64, bits)
    };
    let ceiling: Vec<usize> = (0..ncols).map(|c| (c + 1).min(nrows)).collect();
    let mut profile = vec![0usize; ncols];
    // Per prime: the reduced rows and the last evaluation point used.
    let mut primes: Vec<(u64, ReducedRows, u64)> = Vec::new();
    loop {
        let rank = *profile.last().unwrap();
        if profile == ceiling || rank >= row_degrees.len() {
            break;
        }
        // certify that no minor of size rank + 1 survives
        let (degree, bits) = bounds(rank + 1);
        let points = degree + 1;
        let mut covered = 0u64;
        let mut work: Vec<(usize, u64)> = Vec::new();
        for k in 0.. {
            if covered > bits {
                break;
            }
            if k == primes.len() {
                let prev = primes.last().map_or(1u64 << 31, |p| p.0);
                let p = prev_prime(prev);
                let reduced = polys
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|c| c.iter().map(|x| reduce(x, p)).collect())
                            .collect()
                    })
                    .collect();
                primes.push((p, reduced, 0));
            }
            covered += 30;
            for t in primes[k].2 + 1..=points {
                work.push((k, t));
            }
        }
        if work.is_empty() {
            break;
        }
        let before = rank;
        for chunk in work.chunks(64) {
            let profiles = exec::map_collect(parallel, chunk, |&(k, t)| {
                modular_profile(&primes[k].1, primes[k].0, t)
            });
            for ((k, t), p) in chunk.iter().zip(profiles) {
                primes[*k].2 = primes[*k].2.max(*t);
                for (best, got) in profile.iter_mut().zip(p) {
                    *best = (*best).max(got);
                }
            }
            if *profile.last().unwrap() > before || profile == ceiling {
                break;
            }
        }
    }
    let mut pivots = Vec::new();
    let mut prev = 0;
    for (c, &r) in profile.iter().enumerate() {
        if r > prev {
            pivots.push(c);
        }
        prev = r;
    }
    (pivots.len(), pivots)
}

fn reduce(x: &BigInt, p: u64) -> u64 {
    let r = x % BigInt::from(p);
    let r = if r.is_negative() {
        r + BigInt::from(p)
    } else {
        r
    };
    r.to_u64().expect("residue fits in u64")
}

/// Residues stay below `2^31`, so products fit in a `u64`.
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for integers below `2^32`.
fn is_prime(n: u64) -> bool {
    debug_assert!(n < 1 << 32);
    if n < 2 {
        return false;
    }
    const BASES: [u64; 3] = [2, 7, 61];
    for b in BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for b in BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn prev_prime(n: u64) -> u64 {
    let mut k = n - 1;
    while !is_prime(k) {
        k -= 1;
    }
    k
}

/// Prefix ranks of the matrix reduced modulo `p` and evaluated at `v = t`:
/// entry `c` is the rank of columns `0..=c`.
fn modular_profile(reduced: &[Vec<Vec<u64>>], p: u64, t: u64) -> Vec<usize> {
    let ncols = reduced[0].len();
    let max_len = reduced.iter().flatten().map(Vec::len).max().unwrap_or(0);
    let mut powers = Vec::with_capacity(max_len);
    let mut pw = 1u64;
    for _ in 0..max_len {
        powers.push(pw);
        pw = mul_mod(pw, t, p);
    }
    let mut m: Vec<Vec<u64>> = reduced
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| {
                    let mut acc = 0u64;
                    for (x, q) in c.iter().zip(&powers) {
                        acc += x * q;
                        if acc >= 1 << 63 {
                            acc %= p;
                        }
                    }
                    acc % p
                })
                .collect()
        })
        .collect();
    let nrows = m.len();
    let mut out = Vec::with_capacity(ncols);
    let mut r = 0;
    for c in 0..ncols {
        if r < nrows {
            if let Some(k) = (r..nrows).find(|&k| m[k][c] != 0) {
                m.swap(r, k);
                let inv = pow_mod(m[r][c], p - 2, p);
                let (head, tail) = m.split_at_mut(r + 1);
                let pivot = &head[r];
                for row in tail.iter_mut() {
                    if row[c] == 0 {
                        continue;
                    }
                    let f = mul_mod(row[c], inv, p);
                    for k in c..ncols {
                        row[k] = (row[k] + p - mul_mod(f, pivot[k], p)) % p;
                    }
                }
                r += 1;
            }
        }
        out.push(r);
    }
    out
}

/// Solves `a x = b` over `Q(v)`; free variables are set to zero.
/// Returns `None` when the system is inconsistent.
pub(crate) fn solve(
    a: &[Vec<RationalFn>],
    b: &[RationalFn],
    parallel: bool,
) -> Option<Vec<RationalFn>> {
    let n = a.first().map_or(0, Vec::len);
    let rows: Vec<Vec<Coeffs>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut full = row.clone();
            full.push(rhs.clone());
            clear_row(&full)
        })
        .collect();
    let e = echelon(rows, parallel);
    if e.pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![RationalFn::zero(); n];
    for (r, &pc) in e.pivots.iter().enumerate().rev() {
        let row = &e.rows[r];
        let mut acc = to_rf(&row[n]);
        for (k, xk) in x.iter().enumerate().skip(pc + 1) {
            if !xk.is_zero() && !row[k].is_empty() {
                acc -= &(xk * &to_rf(&row[k]));
            }
        }
        x[pc] = &acc / &to_rf(&row[pc]);
    }
    Some(x)
}

/// A basis of the right kernel of `a` over `Q(v)`: one vector per
/// non-pivot column, with a 1 in that column and 0 in the other free ones.
pub(crate) fn kernel(a: &[Vec<RationalFn>], parallel: bool) -> Vec<Vec<RationalFn>> {
    let n = a.first().map_or(0, Vec::len);
    let rows: Vec<Vec<Coeffs>> = a.iter().map(|r| clear_row(r)).collect();
    let e = echelon(rows, parallel);
    let free: Vec<usize> = (0..n).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![RationalFn::zero(); n];
            x[f] = RationalFn::one();
            for (r, &pc) in e.pivots.iter().enumerate().rev() {
                let row = &e.rows[r];
                let mut acc = RationalFn::zero();
                for (k, xk) in x.iter().enumerate().skip(pc + 1) {
                    if !xk.is_zero() && !row[k].is_empty() {
                        acc -= &(xk * &to_rf(&row[k]));
                    }
                }
                x[pc] = &acc / &to_rf(&row[pc]);
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(terms: &[(i64, i64)]) -> RationalFn {
        RationalFn::from(LaurentPoly::from_terms(terms.iter().copied()))
    }

    fn mat_vec(a: &[Vec<RationalFn>], x: &[RationalFn]) -> Vec<RationalFn> {
        a.iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(RationalFn::zero(), |acc, (p, q)| &acc + &(p * q))
            })
            .collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        // rows: r0, r1, r0 * (v + 1) + r1 * v^-1
        let r0 = vec![rf(&[(0, 1)]), rf(&[(1, 1)]), rf(&[(-1, 2)])];
        let r1 = vec![rf(&[(2, 1), (0, 1)]), rf(&[]), rf(&[(0, 3)])];
        let k0 = rf(&[(1, 1), (0, 1)]);
        let k1 = rf(&[(-1, 1)]);
        let r2: Vec<RationalFn> = r0
            .iter()
            .zip(&r1)
            .map(|(a, b)| &(a * &k0) + &(b * &k1))
            .collect();
        let rows: Vec<Vec<LaurentPoly>> = [r0, r1, r2]
            .iter()
            .map(|r| r.iter().map(|x| x.numer().clone()).collect())
            .collect();
        let (rank, pivots) = rank_and_pivots(&rows, false);
        assert_eq!(rank, 2);
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(rank_and_pivots_bareiss(&rows, false), (rank, pivots));
    }

    #[test]
    fn solve_and_kernel() {
        let a = vec![
            vec![rf(&[(0, 1)]), rf(&[(1, 1)]), rf(&[(0, 1), (1, 1)])],
            vec![rf(&[(-1, 1)]), rf(&[(0, 2)]), rf(&[(-1, 1), (0, 2)])],
        ];
        let b = vec![rf(&[(3, 1)]), rf(&[(0, -1)])];
        let x = solve(&a, &b, false).expect("consistent");
        assert_eq!(mat_vec(&a, &x), b);
        let ker = kernel(&a, false);
        assert_eq!(ker.len(), 1);
        for k in &ker {
            assert!(mat_vec(&a, k).iter().all(RationalFn::is_zero));
        }
        // inconsistent: same left side twice, different right sides
        let a2 = vec![a[0].clone(), a[0].clone()];
        assert!(solve(&a2, &[rf(&[(0, 1)]), rf(&[(0, 2)])], false).is_none());
    }

    #[test]
    fn fractional_entries_are_cleared() {
        let half_v = RationalFn::new(LaurentPoly::v_pow(1), LaurentPoly::constant(2)).unwrap();
        let inv = RationalFn::new(
            LaurentPoly::one(),
            LaurentPoly::from_terms([(0, 1), (1, 1)]),
        )
        .unwrap();
        let a = vec![
            vec![half_v.clone(), inv.clone()],
            vec![inv.clone(), half_v.clone()],
        ];
        let b = vec![RationalFn::one(), RationalFn::v_pow(2)];
        let x = solve(&a, &b, false).unwrap();
        assert_eq!(mat_vec(&a, &x), b);
    }

    #[test]
    fn primes_are_prime() {
        assert!(is_prime(2) && is_prime(97) && !is_prime(91) && !is_prime(1));
        let p = prev_prime(1 << 31);
        assert_eq!(p, 2_147_483_647);
        let naive = |n: u64| {
            n >= 2
                && (2..)
                    .take_while(|d| d * d <= n)
                    .all(|d| !n.is_multiple_of(d))
        };
        for n in (0..2000).chain(1_000_000..1_002_000) {
            assert_eq!(is_prime(n), naive(n), "{n}");
        }
    }

    #[test]
    fn evaluation_rank_matches_bareiss() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for trial in 0..40 {
            let n = rng.gen_range(1..7);
            let m = rng.gen_range(1..7);
            let k = rng.gen_range(1..4);
            // rank at most k: products of random n x k and k x m factors
            let left: Vec<Vec<LaurentPoly>> = (0..n)
                .map(|_| (0..k).map(|_| random_poly(&mut rng)).collect())
                .collect();
            let right: Vec<Vec<LaurentPoly>> = (0..k)
                .map(|_| (0..m).map(|_| random_poly(&mut rng)).collect())
                .collect();
            let a: Vec<Vec<LaurentPoly>> = (0..n)
                .map(|i| {
                    (0..m)
                        .map(|j| {
                            (0..k).fold(LaurentPoly::zero(), |acc, l| {
                                &acc + &(&left[i][l] * &right[l][j])
                            })
                        })
                        .collect()
                })
                .collect();
            assert_eq!(
                rank_and_pivots(&a, false),
                rank_and_pivots_bareiss(&a, false),
                "trial {trial}"
            );
        }
    }

    fn random_poly(rng: &mut impl rand::Rng) -> LaurentPoly {
        if rng.gen_bool(0.2) {
            return LaurentPoly::zero();
        }
        let terms: Vec<(i64, i64)> = (0..rng.gen_range(1..4))
            .map(|_| (rng.gen_range(-3..4), rng.gen_range(-5..6)))
            .collect();
        LaurentPoly::from_terms(terms)
    }
}
