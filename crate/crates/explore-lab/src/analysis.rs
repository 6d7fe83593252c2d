//! Exact evaluation of the cost recursions, bounds and limits, plus a
//! Held-Karp oracle for small exploration instances.
//!
//! Indexing: vectors hold levels `-1..=N`, so entry `k` is level `k - 1`.

use num::{BigInt, BigRational, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::adversary::{Params, Topology};
use crate::graph::{Restrict, VertexId, Weight, WeightedGraph};

/// Largest instance accepted by [`exact_exploration_opt`].
pub const HELD_KARP_LIMIT: usize = 18;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("weight arithmetic overflow")]
    Overflow,
    #[error("optimum cost is zero")]
    ZeroOpt,
    #[error("instance with {0} vertices exceeds the exact-oracle limit")]
    TooLarge(usize),
}

type R<T> = Result<T, AnalysisError>;

fn add(a: Weight, b: Weight) -> R<Weight> {
    a.checked_add(b).ok_or(AnalysisError::Overflow)
}

fn mul(a: Weight, b: Weight) -> R<Weight> {
    a.checked_mul(b).ok_or(AnalysisError::Overflow)
}

fn sub(a: Weight, b: Weight) -> R<Weight> {
    a.checked_sub(b).ok_or(AnalysisError::Overflow)
}

fn pow(x: Weight, k: u32) -> R<Weight> {
    x.checked_pow(k).ok_or(AnalysisError::Overflow)
}

/// `e_i` via `e_i = x (t_{i-1} + e_{i-1})`, `e_{-1} = 1`, `t_{-1} = 0`.
pub fn edge_weight(x: u64, y: u64, i: i32) -> R<Weight> {
    Ok(et_pair(x, y, i)?.0)
}

/// `t_i = y (t_{i-1} + e_{i-1})`.
pub fn traversal_cost(x: u64, y: u64, i: i32) -> R<Weight> {
    Ok(et_pair(x, y, i)?.1)
}

fn et_pair(x: u64, y: u64, i: i32) -> R<(Weight, Weight)> {
    let (x, y) = (x as Weight, y as Weight);
    let (mut e, mut t) = (1u128, 0u128);
    for _ in 0..=i {
        let s = add(e, t)?;
        (e, t) = (mul(x, s)?, mul(y, s)?);
    }
    Ok((e, t))
}

/// `e_i` via `e_i = (x + y) e_{i-1}`, `e_0 = x`.
pub fn edge_weight_product(x: u64, y: u64, i: i32) -> R<Weight> {
    if i < 0 {
        return Ok(1);
    }
    mul(x as Weight, pow((x + y) as Weight, i as u32)?)
}

/// `(3 - y/x) e_i`, exact because `x | e_i` for `i >= 0`.
fn u_increment(x: u64, y: u64, e: Weight) -> R<Weight> {
    let ye = mul(y as Weight, e)?;
    assert_eq!(ye % x as Weight, 0, "x must divide y*e_i");
    sub(mul(3, e)?, ye / x as Weight)
}

/// `U_i = x U_{i-1} + (3 - y/x) e_i` with `U_{-1} = 1`.
pub fn u_bound(x: u64, y: u64, i: i32) -> R<Weight> {
    let mut u = 1u128;
    for k in 0..=i {
        u = add(mul(x as Weight, u)?, u_increment(x, y, edge_weight(x, y, k)?)?)?;
    }
    Ok(u)
}

/// `x^{i+1} U_{-1} + sum_{j=0}^{i} x^j (3 - y/x) e_{i-j}`.
pub fn u_bound_closed(x: u64, y: u64, i: i32) -> R<Weight> {
    if i < 0 {
        return Ok(1);
    }
    let mut acc = pow(x as Weight, (i + 1) as u32)?;
    for j in 0..=i {
        let term = mul(
            pow(x as Weight, j as u32)?,
            u_increment(x, y, edge_weight(x, y, i - j)?)?,
        )?;
        acc = add(acc, term)?;
    }
    Ok(acc)
}

/// `U°_N = x U_{N-1} + 3 e_N`.
pub fn ucirc_bound(x: u64, y: u64, n: u32) -> R<Weight> {
    let n = n as i32;
    add(mul(x as Weight, u_bound(x, y, n - 1)?)?, mul(3, edge_weight(x, y, n)?)?)
}

/// Closed form of `U°_N + 2 e_N` for `y = x/2`:
/// `x^{N+1} U_{-1} + sum_{j=1}^{N} (5/2) x^j e_{N-j} + 5 e_N`.
pub fn ucirc_plus_two_closed(x: u64, n: u32) -> R<Weight> {
    let y = x / 2;
    let n = n as i32;
    let mut acc = pow(x as Weight, (n + 1) as u32)?;
    for j in 1..=n {
        let t = mul(pow(x as Weight, j as u32)?, edge_weight(x, y, n - j)?)?;
        acc = add(acc, mul(5, t)? / 2)?;
    }
    add(acc, mul(5, edge_weight(x, y, n)?)?)
}

/// `V_i = (x + 3) V_{i-1} - e_{i-1} + e_i` with `V_{-1} = 1`.
pub fn v_cost(x: u64, y: u64, i: i32) -> R<Weight> {
    let mut v = 1u128;
    for k in 0..=i {
        let grown = mul((x + 3) as Weight, v)?;
        v = sub(add(grown, edge_weight(x, y, k)?)?, edge_weight(x, y, k - 1)?)?;
    }
    Ok(v)
}

pub fn alg_lower_bound(p: &Params) -> R<Weight> {
    let x = p.x as Weight;
    match p.topology {
        Topology::Simple => sub(mul(4, mul(x, x)?)?, x),
        Topology::Rec => mul(x, u_bound(p.x, p.y, p.levels as i32)?),
        Topology::Chain => {
            let inner = add(
                ucirc_bound(p.x, p.y, p.levels)?,
                mul(2, edge_weight(p.x, p.y, p.levels as i32)?)?,
            )?;
            mul(mul(x, x)?, inner)
        }
    }
}

pub fn opt_formula(p: &Params) -> R<Weight> {
    let x = p.x as Weight;
    let n = p.levels as i32;
    match p.topology {
        Topology::Simple => add(mul(2, mul(x, x)?)?, mul(6, x)?),
        Topology::Rec => mul(x + 3, v_cost(p.x, p.y, n)?),
        Topology::Chain => {
            let blocks = add(mul(x + 1, x + 2)?, 1)?;
            add(
                mul(blocks, v_cost(p.x, p.y, n)?)?,
                mul(2 * x - 1, edge_weight(p.x, p.y, n)?)?,
            )
        }
    }
}

/// Exact cost of the backbone tour of the chain this crate builds:
/// `(x^2 + 5x + 2) V_N + x e_N`. The final and closing block of every
/// cycle are crossed as well, which `opt_formula` does not count.
pub fn chain_tour_cost(x: u64, y: u64, n: u32) -> R<Weight> {
    let xw = x as Weight;
    let blocks = add(add(mul(xw, xw)?, mul(5, xw)?)?, 2)?;
    add(
        mul(blocks, v_cost(x, y, n as i32)?)?,
        mul(xw, edge_weight(x, y, n as i32)?)?,
    )
}

/// The tour cost the construction is expected to produce.
pub fn expected_tour_cost(p: &Params) -> R<Weight> {
    match p.topology {
        Topology::Chain => chain_tour_cost(p.x, p.y, p.levels),
        _ => opt_formula(p),
    }
}

pub fn rational(num: Weight, den: Weight) -> R<BigRational> {
    if den == 0 {
        return Err(AnalysisError::ZeroOpt);
    }
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

pub fn analytic_ratio(p: &Params) -> R<BigRational> {
    rational(alg_lower_bound(p)?, opt_formula(p)?)
}

/// Asymptotic bound: 2, `3 - 2/(N+2)` or `10/3 - 2/(3N+6)`.
pub fn limit_value(topology: Topology, n: u32) -> BigRational {
    let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    let n = n as i64;
    match topology {
        Topology::Simple => r(2, 1),
        Topology::Rec => r(3, 1) - r(2, n + 2),
        Topology::Chain => r(10, 3) - r(2, 3 * n + 6),
    }
}

/// What `analytic_ratio` of the chain actually tends to as `x` grows with
/// `y = x/2`: `(10 * 3^N - 4 * 2^N) / (3^{N+1} - 2^N)`. It agrees with
/// `limit_value` at `N = 0` and lies above it for `N >= 1`, since
/// `e_j = (3x/2)^j x` outgrows `x^j e_0`.
pub fn chain_asymptote(n: u32) -> BigRational {
    let three = BigInt::from(3).pow(n);
    let two = BigInt::from(2).pow(n);
    BigRational::new(
        BigInt::from(10) * &three - BigInt::from(4) * &two,
        BigInt::from(3) * three - two,
    )
}

/// The bound for a chain whose weights were lifted to `k` distinct values.
pub fn lifted_limit_value(k: u32) -> BigRational {
    BigRational::new(10.into(), 3.into()) - BigRational::new(2.into(), BigInt::from(3 * k as i64))
}

pub fn to_f64(r: &BigRational) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

#[derive(Clone, Debug, Serialize)]
pub struct FormulaTable {
    pub x: u64,
    pub y: u64,
    pub n: u32,
    pub topology: Topology,
    /// `e_{-1..=N}`
    pub e: Vec<Weight>,
    pub t: Vec<Weight>,
    pub u: Vec<Weight>,
    pub v: Vec<Weight>,
    pub u_circ: Weight,
    pub alg_lb: Weight,
    pub opt_formula: Weight,
    #[serde(serialize_with = "ser_ratio")]
    pub ratio: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub limit: BigRational,
}

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

impl FormulaTable {
    pub fn new(p: &Params) -> R<Self> {
        let n = p.levels as i32;
        let levels = -1..=n;
        let e = levels
            .clone()
            .map(|i| edge_weight(p.x, p.y, i))
            .collect::<R<Vec<_>>>()?;
        let t = levels
            .clone()
            .map(|i| traversal_cost(p.x, p.y, i))
            .collect::<R<Vec<_>>>()?;
        let u = levels.clone().map(|i| u_bound(p.x, p.y, i)).collect::<R<Vec<_>>>()?;
        let v = levels.map(|i| v_cost(p.x, p.y, i)).collect::<R<Vec<_>>>()?;
        let alg_lb = alg_lower_bound(p)?;
        let opt = opt_formula(p)?;
        Ok(FormulaTable {
            x: p.x,
            y: p.y,
            n: p.levels,
            topology: p.topology,
            e,
            t,
            u,
            v,
            u_circ: ucirc_bound(p.x, p.y, p.levels)?,
            alg_lb,
            opt_formula: opt,
            ratio: rational(alg_lb, opt)?,
            limit: limit_value(p.topology, p.levels),
        })
    }

    /// `e_i` for `i >= -1`.
    pub fn e(&self, i: i32) -> Weight {
        self.e[(i + 1) as usize]
    }

    pub fn v(&self, i: i32) -> Weight {
        self.v[(i + 1) as usize]
    }
}

/// Cheapest walk from `start` that visits every vertex, returning to
/// `start` when `end_at_start` holds and otherwise ending anywhere.
/// Held-Karp over the shortest-path metric closure.
pub fn exact_exploration_opt(g: &WeightedGraph, start: VertexId, end_at_start: bool) -> R<Weight> {
    let n = g.vertex_count();
    if n > HELD_KARP_LIMIT {
        return Err(AnalysisError::TooLarge(n));
    }
    if n <= 1 {
        return Ok(0);
    }
    const INF: Weight = Weight::MAX;
    let dist: Vec<Vec<Weight>> = g
        .vertices()
        .map(|v| {
            g.distances_from(v, Restrict::All)
                .into_iter()
                .map(|d| d.unwrap_or(INF))
                .collect()
        })
        .collect();
    let others: Vec<usize> = (0..n).filter(|&v| v != start.index()).collect();
    let m = others.len();
    let full = (1usize << m) - 1;
    let mut dp = vec![INF; (1 << m) * m];
    for (k, &v) in others.iter().enumerate() {
        dp[(1 << k) * m + k] = dist[start.index()][v];
    }
    for mask in 1..=full {
        for k in 0..m {
            let cur = dp[mask * m + k];
            if cur == INF || mask & (1 << k) == 0 {
                continue;
            }
            for j in 0..m {
                if mask & (1 << j) != 0 {
                    continue;
                }
                let d = dist[others[k]][others[j]];
                if d == INF {
                    continue;
                }
                let nm = mask | (1 << j);
                let cand = add(cur, d)?;
                if cand < dp[nm * m + j] {
                    dp[nm * m + j] = cand;
                }
            }
        }
    }
    let mut best = INF;
    for k in 0..m {
        let cur = dp[full * m + k];
        if cur == INF {
            continue;
        }
        let total = if end_at_start {
            let back = dist[others[k]][start.index()];
            if back == INF {
                continue;
            }
            add(cur, back)?
        } else {
            cur
        };
        best = best.min(total);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_values() {
        assert_eq!(edge_weight(7, 3, -1).unwrap(), 1);
        assert_eq!(traversal_cost(7, 3, -1).unwrap(), 0);
        assert_eq!(edge_weight(4, 2, 1).unwrap(), 24);
        assert_eq!(traversal_cost(4, 2, 0).unwrap(), 2);
        assert_eq!(u_bound(9, 2, 0).unwrap(), 4 * 9 - 2);
        assert_eq!(u_bound(10, 0, 1).unwrap(), 700);
        assert_eq!(v_cost(11, 3, 0).unwrap(), 24);
        assert_eq!(v_cost(10, 0, 1).unwrap(), 376);
        assert_eq!(ucirc_bound(4, 2, 1).unwrap(), 128);
    }

    #[test]
    fn overflow_is_reported() {
        assert_eq!(edge_weight(1 << 40, 0, 5), Err(AnalysisError::Overflow));
    }

    #[test]
    fn triangle_tour() {
        let mut g = WeightedGraph::with_vertices(3);
        g.add_edge(VertexId(0), VertexId(1), 1).unwrap();
        g.add_edge(VertexId(1), VertexId(2), 1).unwrap();
        g.add_edge(VertexId(0), VertexId(2), 1).unwrap();
        assert_eq!(exact_exploration_opt(&g, VertexId(0), true).unwrap(), 3);
        assert_eq!(exact_exploration_opt(&g, VertexId(0), false).unwrap(), 2);
    }

    #[test]
    fn held_karp_refuses_large_graphs() {
        let g = WeightedGraph::with_vertices(19);
        assert_eq!(
            exact_exploration_opt(&g, VertexId(0), true),
            Err(AnalysisError::TooLarge(19))
        );
    }
}
