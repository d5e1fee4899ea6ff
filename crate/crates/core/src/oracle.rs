//! Brute-force ground truth: minimum completion by subset enumeration,
//! enumeration of all chordal completions, and exact affine rank.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::graph::{Adjacency, FillIndex, Graph, Point};

/// Largest fill space `enumerate_completions` accepts.
pub const MAX_ENUMERATION_DIM: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error(
        "enumeration budget of {budget} subsets exceeded; largest fully checked subset size: {completed:?}"
    )]
    BudgetExceeded {
        budget: u64,
        completed: Option<usize>,
    },
    #[error("fill space of dimension {mc} exceeds the enumeration limit {limit}")]
    DimensionTooLarge { mc: usize, limit: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct EnumerationBudget {
    pub max_subsets: u64,
    pub max_cardinality: Option<usize>,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_subsets: 10_000_000,
            max_cardinality: None,
        }
    }
}

/// Advances `c` (strictly increasing, values < `n`) to the next combination
/// in colex order. Returns false after the last one.
fn next_colex(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in 0..k {
        let limit = if i + 1 < k { c[i + 1] } else { n };
        if c[i] + 1 < limit {
            c[i] += 1;
            for (j, slot) in c.iter_mut().enumerate().take(i) {
                *slot = j;
            }
            return true;
        }
    }
    false
}

fn is_chordal_with(base: &Adjacency, g: &Graph, fill: &[usize]) -> bool {
    let mut adj = base.clone();
    for &f in fill {
        let (u, v) = g.fill_pair(FillIndex(f));
        adj.add_edge(u, v);
    }
    adj.is_chordal()
}

/// Minimum chordal completion by enumerating fill subsets in order of
/// increasing size (colex within a size). The first chordal hit is returned.
pub fn brute_force_mccp(
    g: &Graph,
    budget: EnumerationBudget,
) -> Result<Vec<FillIndex>, OracleError> {
    let base = g.adjacency();
    let mc = g.mc();
    let max_card = budget.max_cardinality.unwrap_or(mc).min(mc);
    let mut evaluated = 0u64;
    let mut completed = None;
    for k in 0..=max_card {
        let mut comb: Vec<usize> = (0..k).collect();
        loop {
            evaluated += 1;
            if evaluated > budget.max_subsets {
                return Err(OracleError::BudgetExceeded {
                    budget: budget.max_subsets,
                    completed,
                });
            }
            if is_chordal_with(&base, g, &comb) {
                return Ok(comb.into_iter().map(FillIndex).collect());
            }
            if !next_colex(&mut comb, mc) {
                break;
            }
        }
        completed = Some(k);
    }
    // Adding every fill edge always gives a complete graph; reaching this
    // point means the cardinality cap stopped the search.
    Err(OracleError::BudgetExceeded {
        budget: budget.max_subsets,
        completed,
    })
}

/// Every chordal completion of `g`, each exactly once, in increasing
/// bitmask order.
pub fn enumerate_completions(g: &Graph) -> Result<Completions<'_>, OracleError> {
    if g.mc() > MAX_ENUMERATION_DIM {
        return Err(OracleError::DimensionTooLarge {
            mc: g.mc(),
            limit: MAX_ENUMERATION_DIM,
        });
    }
    Ok(Completions {
        g,
        base: g.adjacency(),
        next: 0,
        end: 1u64 << g.mc(),
    })
}

pub struct Completions<'a> {
    g: &'a Graph,
    base: Adjacency,
    next: u64,
    end: u64,
}

impl Iterator for Completions<'_> {
    type Item = Vec<FillIndex>;

    fn next(&mut self) -> Option<Self::Item> {
        while self.next < self.end {
            let mask = self.next;
            self.next += 1;
            let fill: Vec<usize> = (0..self.g.mc()).filter(|i| mask >> i & 1 == 1).collect();
            if is_chordal_with(&self.base, self.g, &fill) {
                return Some(fill.into_iter().map(FillIndex).collect());
            }
        }
        None
    }
}

fn exact_scaled(points: &[Point]) -> Vec<Vec<BigInt>> {
    // Every finite f64 is m * 2^e; bring all of them over the smallest
    // exponent so the matrix becomes integral.
    let decompose = |v: f64| -> (i64, i32) {
        if v == 0.0 {
            return (0, 0);
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
        let exp = ((bits >> 52) & 0x7ff) as i32;
        let frac = (bits & 0xf_ffff_ffff_ffff) as i64;
        let (mantissa, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | 0x10_0000_0000_0000, exp - 1075)
        };
        (sign * mantissa, e)
    };
    let min_exp = points
        .iter()
        .flat_map(|p| p.values().iter())
        .filter(|v| **v != 0.0)
        .map(|&v| decompose(v).1)
        .min()
        .unwrap_or(0);
    points
        .iter()
        .map(|p| {
            p.values()
                .iter()
                .map(|&v| {
                    let (m, e) = decompose(v);
                    BigInt::from(m) << ((e - min_exp) as usize)
                })
                .collect()
        })
        .collect()
}

fn normalize(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !g.is_zero() && g != BigInt::from(1) {
        for v in row.iter_mut() {
            *v /= &g;
        }
    }
}

/// Dimension of the affine hull of `points`: rank of `{x_i - x_0}` by
/// fraction-free elimination over exact integers.
pub fn affine_rank(points: &[Point]) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    let dim = first.len();
    let rows = exact_scaled(points);
    let origin = &rows[0];
    let mut basis: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for row in &rows[1..] {
        if basis.len() == dim {
            break;
        }
        let mut r: Vec<BigInt> = row.iter().zip(origin).map(|(a, b)| a - b).collect();
        for (p, b) in &basis {
            if r[*p].is_zero() {
                continue;
            }
            let (rp, bp) = (r[*p].clone(), b[*p].clone());
            for (x, y) in r.iter_mut().zip(b) {
                *x = &*x * &bp - y * &rp;
            }
            normalize(&mut r);
        }
        if let Some(p) = r.iter().position(|v| !v.is_zero()) {
            if r[p].is_negative() {
                r.iter_mut().for_each(|v| *v = -&*v);
            }
            basis.push((p, r));
        }
    }
    basis.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colex_order() {
        let mut c = vec![0, 1];
        let mut seen = vec![c.clone()];
        while next_colex(&mut c, 4) {
            seen.push(c.clone());
        }
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 3],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        let mut empty: Vec<usize> = vec![];
        assert!(!next_colex(&mut empty, 3));
    }

    #[test]
    fn brute_force_examples() {
        let k23 = Graph::new(5, &[(0, 1), (0, 3), (1, 2), (2, 3), (1, 4), (3, 4)]).unwrap();
        let opt = brute_force_mccp(&k23, EnumerationBudget::default()).unwrap();
        assert_eq!(opt, vec![k23.fill_index(1, 3).unwrap()]);
        for k in 4..=8 {
            let c = Graph::cycle(k);
            let opt = brute_force_mccp(&c, EnumerationBudget::default()).unwrap();
            assert_eq!(opt.len(), k - 3, "C{k}");
        }
        assert!(
            brute_force_mccp(&Graph::complete(4), EnumerationBudget::default())
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn budget_is_reported() {
        let c7 = Graph::cycle(7);
        let err = brute_force_mccp(
            &c7,
            EnumerationBudget {
                max_subsets: 20,
                max_cardinality: None,
            },
        )
        .unwrap_err();
        // 1 + 14 subsets of size <= 1, then the budget runs out at size 2.
        assert_eq!(
            err,
            OracleError::BudgetExceeded {
                budget: 20,
                completed: Some(1)
            }
        );
    }

    #[test]
    fn enumeration_examples() {
        let c4 = Graph::cycle(4);
        let all: Vec<_> = enumerate_completions(&c4).unwrap().collect();
        assert_eq!(
            all,
            vec![
                vec![FillIndex(0)],
                vec![FillIndex(1)],
                vec![FillIndex(0), FillIndex(1)]
            ]
        );
        let k5 = Graph::complete(5);
        assert_eq!(enumerate_completions(&k5).unwrap().count(), 1);

        let c5 = Graph::cycle(5);
        let count = enumerate_completions(&c5).unwrap().count();
        let direct = (0u32..32)
            .filter(|mask| {
                let f: Vec<_> = (0..5)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(FillIndex)
                    .collect();
                c5.is_valid_completion(&f)
            })
            .count();
        assert_eq!(count, direct);

        assert!(enumerate_completions(&Graph::cycle(8)).is_ok());
        let bigger = Graph::cycle(9);
        assert!(matches!(
            enumerate_completions(&bigger),
            Err(OracleError::DimensionTooLarge { mc: 27, .. })
        ));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(affine_rank(&[Point::new(vec![1.0, 0.0, 1.0])]), 0);
        let c4 = Graph::cycle(4);
        let pts: Vec<_> = enumerate_completions(&c4)
            .unwrap()
            .map(|f| Point::from_fill(c4.mc(), &f))
            .collect();
        assert_eq!(affine_rank(&pts), 2);
        let collinear = [
            Point::new(vec![0.0, 0.0]),
            Point::new(vec![0.5, 0.25]),
            Point::new(vec![1.0, 0.5]),
        ];
        assert_eq!(affine_rank(&collinear), 1);
        let not_collinear = [
            Point::new(vec![0.0, 0.0]),
            Point::new(vec![0.5, 0.25]),
            Point::new(vec![1.0, 0.5000001]),
        ];
        assert_eq!(affine_rank(&not_collinear), 2);
    }

    #[test]
    fn rank_of_c5_i1_tight_points() {
        let c5 = Graph::cycle(5);
        let tight: Vec<_> = enumerate_completions(&c5)
            .unwrap()
            .filter(|f| f.len() == 2)
            .map(|f| Point::from_fill(c5.mc(), &f))
            .collect();
        assert_eq!(affine_rank(&tight), 4);
    }
}
