//! Exact stationary distributions of finite Markov chains.

use num_traits::{One, Zero};

use super::MeasureError;
use crate::item::{format_rat, rat, Rat};

/// A finite chain given by labeled states and an exact row-stochastic
/// transition matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovChain {
    pub labels: Vec<String>,
    pub transition: Vec<Vec<Rat>>,
}

impl MarkovChain {
    pub fn new(labels: Vec<String>, transition: Vec<Vec<Rat>>) -> Result<Self, MeasureError> {
        if labels.is_empty() || labels.len() != transition.len() {
            return Err(MeasureError::NotStochastic(
                "matrix must be square and match the label count".into(),
            ));
        }
        for (i, row) in transition.iter().enumerate() {
            if row.len() != labels.len() {
                return Err(MeasureError::NotStochastic(format!("row {i} has wrong length")));
            }
            if row.iter().any(|p| p < &Rat::zero()) {
                return Err(MeasureError::NotStochastic(format!("row {i} has a negative entry")));
            }
            let total: Rat = row.iter().cloned().sum();
            if total != Rat::one() {
                return Err(MeasureError::NotStochastic(format!(
                    "row {i} sums to {}",
                    format_rat(&total)
                )));
            }
        }
        Ok(MarkovChain { labels, transition })
    }

    /// The open-bin state chain of DNF on a long two-size stream with
    /// equally likely kinds: N (empty), L (one large), S (smalls only).
    /// From N a large opens L and a small opens S; from L anything
    /// closes; from S a large closes and a small stays.
    pub fn dnf_two_size() -> Self {
        MarkovChain::new(
            vec!["N".into(), "L".into(), "S".into()],
            vec![
                vec![rat(0, 1), rat(1, 2), rat(1, 2)],
                vec![rat(1, 1), rat(0, 1), rat(0, 1)],
                vec![rat(1, 2), rat(0, 1), rat(1, 2)],
            ],
        )
        .expect("fixed chain is stochastic")
    }

    /// Strong connectivity of the positive-transition digraph.
    pub fn is_irreducible(&self) -> bool {
        let n = self.labels.len();
        let reach_from = |start: usize, forward: bool| {
            let mut seen = vec![false; n];
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                for w in 0..n {
                    let edge = if forward {
                        &self.transition[v][w]
                    } else {
                        &self.transition[w][v]
                    };
                    if edge > &Rat::zero() && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            seen
        };
        reach_from(0, true).iter().all(|&b| b) && reach_from(0, false).iter().all(|&b| b)
    }
}

/// Solves pi P = pi, sum(pi) = 1 exactly. For an irreducible finite
/// chain the solution is unique and strictly positive.
pub fn markov_stationary(chain: &MarkovChain) -> Result<Vec<Rat>, MeasureError> {
    if !chain.is_irreducible() {
        return Err(MeasureError::NotIrreducible);
    }
    let n = chain.labels.len();
    // Rows of (P^T - I), with the last replaced by the normalization.
    let mut m: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut v = chain.transition[j][i].clone();
                    if i == j {
                        v -= Rat::one();
                    }
                    v
                })
                .collect()
        })
        .collect();
    let mut rhs: Vec<Rat> = vec![Rat::zero(); n];
    m[n - 1] = vec![Rat::one(); n];
    rhs[n - 1] = Rat::one();

    // Gaussian elimination with nonzero pivoting, exact throughout.
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or(MeasureError::NotIrreducible)?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let head = m[col][col].clone();
        for j in col..n {
            m[col][j] = &m[col][j] / &head;
        }
        rhs[col] = &rhs[col] / &head;
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for j in col..n {
                let delta = &factor * &m[col][j];
                m[r][j] = &m[r][j] - delta;
            }
            let delta = &factor * &rhs[col];
            rhs[r] = &rhs[r] - delta;
        }
    }
    Ok(rhs)
}
