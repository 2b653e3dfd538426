//! Fourier–Motzkin projections of `{v : A v + b ≥ 0}` onto leading
//! coordinate prefixes, with Chernikov's history rule and integer rounding
//! of each derived row.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{EtaError, Result};

/// `∑ a_j v_j + b ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub a: Vec<BigInt>,
    pub b: BigInt,
    history: Vec<u64>,
}

impl Row {
    /// Original row number `id` of the system.
    pub fn new(a: Vec<BigInt>, b: BigInt, id: usize) -> Self {
        let mut history = vec![0u64; id / 64 + 1];
        history[id / 64] |= 1 << (id % 64);
        Row { a, b, history }
    }

    fn history_size(&self) -> u32 {
        self.history.iter().map(|w| w.count_ones()).sum()
    }

    /// Divides by the content of `a` and floors `b`; valid for integer `v`.
    fn normalized(mut self) -> Self {
        let g = self.a.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if !g.is_zero() && !g.is_one() {
            for x in &mut self.a {
                *x /= &g;
            }
            self.b = self.b.div_floor(&g);
        }
        self
    }

    fn is_constant(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }
}

fn merge_history(x: &[u64], y: &[u64]) -> Vec<u64> {
    let len = x.len().max(y.len());
    (0..len).map(|i| x.get(i).copied().unwrap_or(0) | y.get(i).copied().unwrap_or(0)).collect()
}

/// Row sets bounding each coordinate given the earlier ones.
#[derive(Clone, Debug)]
pub struct Projections {
    /// `levels[j]`: rows over `v_0..=v_j` whose `v_j` coefficient is nonzero.
    pub levels: Vec<Vec<Row>>,
    /// A constant row came out negative: the system has no integer point.
    pub infeasible: bool,
}

/// Eliminates `v_{n-1}, …, v_1` in turn.
pub fn project_prefixes(rows: Vec<Row>, nvars: usize) -> Projections {
    let mut levels: Vec<Vec<Row>> = vec![Vec::new(); nvars];
    let mut infeasible = false;
    let mut current = dedup(rows.into_iter().map(Row::normalized).collect(), &mut infeasible);
    for j in (0..nvars).rev() {
        let (with_j, without): (Vec<Row>, Vec<Row>) = current.into_iter().partition(|r| !r.a[j].is_zero());
        if j == 0 {
            levels[0] = with_j;
            break;
        }
        let eliminated = nvars - j;
        let (pos, neg): (Vec<&Row>, Vec<&Row>) = with_j.iter().partition(|r| r.a[j].is_positive());
        let mut next = without;
        for p in &pos {
            for q in &neg {
                let history = merge_history(&p.history, &q.history);
                let size: u32 = history.iter().map(|w| w.count_ones()).sum();
                if size as usize > eliminated + 1 {
                    continue;
                }
                let (cp, cq) = (-&q.a[j], p.a[j].clone());
                let a = p.a.iter().zip(&q.a).map(|(x, y)| x * &cp + y * &cq).collect();
                let b = &p.b * &cp + &q.b * &cq;
                next.push(Row { a, b, history }.normalized());
            }
        }
        levels[j] = with_j;
        current = dedup(next, &mut infeasible);
    }
    Projections { levels, infeasible }
}

/// Drops constant rows (flagging negative ones) and keeps the tightest row
/// per coefficient vector.
fn dedup(rows: Vec<Row>, infeasible: &mut bool) -> Vec<Row> {
    let mut best: HashMap<Vec<BigInt>, Row> = HashMap::new();
    let mut order: Vec<Vec<BigInt>> = Vec::new();
    for r in rows {
        if r.is_constant() {
            if r.b.is_negative() {
                *infeasible = true;
            }
            continue;
        }
        match best.get_mut(&r.a) {
            Some(existing) => {
                if r.b < existing.b || (r.b == existing.b && r.history_size() < existing.history_size()) {
                    *existing = r;
                }
            }
            None => {
                order.push(r.a.clone());
                best.insert(r.a.clone(), r);
            }
        }
    }
    order.into_iter().map(|k| best.remove(&k).expect("key recorded")).collect()
}

/// A projected row in machine integers for the search loop.
#[derive(Clone, Debug)]
pub struct FastRow {
    pub a: Vec<i128>,
    pub b: i128,
}

pub fn to_fast(levels: &[Vec<Row>]) -> Result<Vec<Vec<FastRow>>> {
    let conv = |x: &BigInt| i128::try_from(x).map_err(|_| EtaError::Internal("projection coefficient exceeds i128".into()));
    levels
        .iter()
        .enumerate()
        .map(|(j, rows)| {
            rows.iter()
                .map(|r| Ok(FastRow { a: r.a[..=j].iter().map(conv).collect::<Result<_>>()?, b: conv(&r.b)? }))
                .collect()
        })
        .collect()
}

/// Integer range of `v_j` allowed by `rows` given `v_0..v_{j-1}`; `None` on
/// overflow.
pub fn coordinate_range(rows: &[FastRow], prefix: &[i128]) -> Option<(i128, i128)> {
    let j = prefix.len();
    let mut lo = i128::MIN;
    let mut hi = i128::MAX;
    for r in rows {
        let mut s = r.b;
        for (c, v) in r.a.iter().zip(prefix) {
            s = s.checked_add(c.checked_mul(*v)?)?;
        }
        let c = r.a[j];
        // c·v + s ≥ 0
        if c > 0 {
            lo = lo.max((-s).div_ceil_i(c));
        } else {
            hi = hi.min(s.div_floor_i(-c));
        }
    }
    Some((lo, hi))
}

trait DivI {
    fn div_floor_i(self, d: i128) -> i128;
    fn div_ceil_i(self, d: i128) -> i128;
}

impl DivI for i128 {
    fn div_floor_i(self, d: i128) -> i128 {
        self.div_euclid(d)
    }

    fn div_ceil_i(self, d: i128) -> i128 {
        -((-self).div_euclid(d))
    }
}
