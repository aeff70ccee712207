//! Exact Fourier–Motzkin elimination for homogeneous strict systems `A x > 0`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Outcome of [`strict_feasibility`].
#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    /// A rational `x` with `A x > 0` componentwise.
    Feasible(Vec<BigRational>),
    /// Integer `y ≥ 0`, `y ≠ 0` with `yᵀA = 0`, one entry per row.
    Infeasible(Vec<BigRational>),
}

#[derive(Clone)]
struct Row {
    a: Vec<BigRational>,
    mult: Vec<BigRational>,
}

fn normalized(mut row: Row) -> Row {
    let scale = row.a.iter().map(|x| x.abs()).max().unwrap_or_else(BigRational::zero);
    if !scale.is_zero() {
        row.a.iter_mut().for_each(|x| *x /= &scale);
        row.mult.iter_mut().for_each(|x| *x /= &scale);
    }
    row
}

fn combine(p: &Row, q: &Row, k: usize) -> Row {
    let (sp, sq) = (-q.a[k].clone(), p.a[k].clone());
    Row {
        a: p.a.iter().zip(&q.a).map(|(x, y)| x * &sp + y * &sq).collect(),
        mult: p.mult.iter().zip(&q.mult).map(|(x, y)| x * &sp + y * &sq).collect(),
    }
}

/// Smallest-magnitude rational in the open interval, preferring integers.
fn pick(lo: Option<&BigRational>, hi: Option<&BigRational>) -> BigRational {
    let zero = BigRational::zero();
    let one = BigRational::one();
    match (lo, hi) {
        (None, None) => zero,
        (Some(l), None) => {
            if *l < zero {
                zero
            } else {
                l.floor() + one
            }
        }
        (None, Some(h)) => {
            if *h > zero {
                zero
            } else {
                h.ceil() - one
            }
        }
        (Some(l), Some(h)) => {
            if *l < zero && zero < *h {
                return zero;
            }
            let candidate = if *l >= zero { l.floor() + one } else { h.ceil() - one };
            if candidate > *l && candidate < *h {
                candidate
            } else {
                (l + h) / BigRational::from_integer(BigInt::from(2))
            }
        }
    }
}

fn integral(y: Vec<BigRational>) -> Vec<BigRational> {
    let lcm = y.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = y.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let gcd = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    scaled
        .into_iter()
        .map(|x| BigRational::from_integer(if gcd.is_zero() { x } else { x / &gcd }))
        .collect()
}

/// Decides `A x > 0` exactly, eliminating the lowest-indexed variable first.
///
/// Fails when an intermediate system exceeds `max_rows` rows.
pub fn strict_feasibility(rows: &[Vec<BigRational>], vars: usize, max_rows: usize) -> Result<Feasibility> {
    if rows.iter().any(|r| r.len() != vars) {
        return Err(Error::InvalidInput("rows of the system have inconsistent length".into()));
    }
    let m = rows.len();
    let mut current: Vec<Row> = rows
        .iter()
        .enumerate()
        .map(|(i, a)| Row {
            a: a.clone(),
            mult: (0..m).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect(),
        })
        .collect();
    let mut stages = Vec::with_capacity(vars);
    for k in 0..=vars {
        if let Some(bad) = current.iter().find(|r| r.a.iter().all(Zero::is_zero)) {
            let y = integral(bad.mult.clone());
            debug_assert!(certifies(rows, &y));
            return Ok(Feasibility::Infeasible(y));
        }
        if k == vars {
            break;
        }
        stages.push(current.clone());
        let (mut next, mut pos, mut neg) = (Vec::new(), Vec::new(), Vec::new());
        for r in current {
            if r.a[k].is_positive() {
                pos.push(r);
            } else if r.a[k].is_negative() {
                neg.push(r);
            } else {
                next.push(r);
            }
        }
        for p in &pos {
            for q in &neg {
                next.push(combine(p, q, k));
            }
        }
        let mut seen = HashSet::new();
        current = next
            .into_iter()
            .map(normalized)
            .filter(|r| seen.insert(r.a.clone()))
            .collect();
        if current.len() > max_rows {
            return Err(Error::InvalidInput(format!(
                "elimination produced {} rows, above the limit of {max_rows}",
                current.len()
            )));
        }
    }

    let mut x = vec![BigRational::zero(); vars];
    for k in (0..vars).rev() {
        let (mut lo, mut hi): (Option<BigRational>, Option<BigRational>) = (None, None);
        for r in &stages[k] {
            if r.a[k].is_zero() {
                continue;
            }
            let rest: BigRational = (k + 1..vars).map(|j| &r.a[j] * &x[j]).sum();
            let bound = -rest / &r.a[k];
            if r.a[k].is_positive() {
                lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
            } else {
                hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
            }
        }
        x[k] = pick(lo.as_ref(), hi.as_ref());
    }
    if rows.iter().any(|r| !r.iter().zip(&x).map(|(a, b)| a * b).sum::<BigRational>().is_positive()) {
        return Err(Error::InvalidInput("back-substitution did not satisfy the system".into()));
    }
    Ok(Feasibility::Feasible(x))
}

/// True iff `y ≥ 0`, `y ≠ 0` and `yᵀA = 0`.
pub fn certifies(rows: &[Vec<BigRational>], y: &[BigRational]) -> bool {
    if y.len() != rows.len() || y.iter().any(|t| t.is_negative()) || y.iter().all(Zero::is_zero) {
        return false;
    }
    let vars = rows.first().map_or(0, |r| r.len());
    (0..vars).all(|j| rows.iter().zip(y).map(|(r, t)| &r[j] * t).sum::<BigRational>().is_zero())
}
