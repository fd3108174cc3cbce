//! Exact optima on tiny hypergraphs by branch and bound over bitmasks.

use serde::Serialize;
use thiserror::Error;

use crate::hypergraph::Hypergraph;
use crate::process::run_reference;
use crate::ProcessKind;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("exact search supports at most 64 vertices, got {0}")]
    TooLarge(usize),
    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactResult {
    pub value: usize,
    /// Edge indices (matching) or vertices (independent set) attaining `value`.
    pub witness: Vec<usize>,
    /// Search nodes visited.
    pub nodes: u64,
}

fn edge_masks(h: &Hypergraph) -> Result<Vec<u64>, OracleError> {
    if h.n() > 64 {
        return Err(OracleError::TooLarge(h.n()));
    }
    Ok(h.edges().iter().map(|e| e.iter().fold(0u64, |m, &v| m | 1 << v)).collect())
}

struct Search {
    budget: u64,
    nodes: u64,
    best: Vec<usize>,
}

impl Search {
    fn visit(&mut self) -> Result<(), OracleError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(OracleError::BudgetExhausted(self.budget));
        }
        Ok(())
    }
}

/// Maximum number of pairwise disjoint edges.
pub fn exact_max_matching(h: &Hypergraph, budget: u64) -> Result<ExactResult, OracleError> {
    let masks = edge_masks(h)?;
    // most conflicting edges first
    let mut order: Vec<usize> = (0..masks.len()).collect();
    let conflicts = |e: usize| masks.iter().filter(|&&f| f & masks[e] != 0).count();
    order.sort_by_key(|&e| std::cmp::Reverse(conflicts(e)));
    let order_masks: Vec<u64> = order.iter().map(|&e| masks[e]).collect();

    let mut greedy = Vec::new();
    let mut used = 0u64;
    for (i, &m) in order_masks.iter().enumerate() {
        if m & used == 0 {
            used |= m;
            greedy.push(i);
        }
    }
    let min_size = order_masks.iter().map(|m| m.count_ones()).min().unwrap_or(1).max(1) as usize;
    let mut s = Search { budget, nodes: 0, best: greedy };

    fn go(
        s: &mut Search,
        masks: &[u64],
        min_size: usize,
        free: u32,
        i: usize,
        used: u64,
        chosen: &mut Vec<usize>,
    ) -> Result<(), OracleError> {
        s.visit()?;
        if chosen.len() > s.best.len() {
            s.best = chosen.clone();
        }
        let rest = masks.len() - i;
        let room = free as usize / min_size;
        if i == masks.len() || chosen.len() + rest.min(room) <= s.best.len() {
            return Ok(());
        }
        if masks[i] & used == 0 {
            chosen.push(i);
            go(s, masks, min_size, free - masks[i].count_ones(), i + 1, used | masks[i], chosen)?;
            chosen.pop();
        }
        go(s, masks, min_size, free, i + 1, used, chosen)
    }

    go(&mut s, &order_masks, min_size, h.n() as u32, 0, 0, &mut Vec::new())?;
    let mut witness: Vec<usize> = s.best.iter().map(|&i| order[i]).collect();
    witness.sort_unstable();
    debug_assert!(h.is_matching(&witness));
    Ok(ExactResult {
        value: witness.len(),
        witness,
        nodes: s.nodes,
    })
}

/// Largest vertex set containing no edge.
pub fn exact_max_independent(h: &Hypergraph, budget: u64) -> Result<ExactResult, OracleError> {
    let masks = edge_masks(h)?;
    let n = h.n();
    let degree = h.degrees();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(degree[v]));

    // edges containing each vertex, for the containment test
    let mut through = vec![Vec::new(); n];
    for &m in &masks {
        for (v, list) in through.iter_mut().enumerate() {
            if m >> v & 1 == 1 {
                list.push(m);
            }
        }
    }

    // greedy incumbent: lowest degree first
    let mut set = 0u64;
    let mut greedy = Vec::new();
    for &v in order.iter().rev() {
        let with = set | 1 << v;
        if through[v].iter().all(|&m| m & with != m) {
            set = with;
            greedy.push(v);
        }
    }
    let mut s = Search { budget, nodes: 0, best: greedy };

    fn go(
        s: &mut Search,
        order: &[usize],
        through: &[Vec<u64>],
        i: usize,
        set: u64,
        chosen: &mut Vec<usize>,
    ) -> Result<(), OracleError> {
        s.visit()?;
        if chosen.len() > s.best.len() {
            s.best = chosen.clone();
        }
        if i == order.len() || chosen.len() + (order.len() - i) <= s.best.len() {
            return Ok(());
        }
        let v = order[i];
        let with = set | 1 << v;
        if through[v].iter().all(|&m| m & with != m) {
            chosen.push(v);
            go(s, order, through, i + 1, with, chosen)?;
            chosen.pop();
        }
        go(s, order, through, i + 1, set, chosen)
    }

    go(&mut s, &order, &through, 0, 0, &mut Vec::new())?;
    let mut witness = s.best;
    witness.sort_unstable();
    debug_assert!(h.is_independent(&witness));
    Ok(ExactResult {
        value: witness.len(),
        witness,
        nodes: s.nodes,
    })
}

/// Greedy output sizes on one fixed instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GreedyStats {
    pub mean: f64,
    pub std_error: f64,
    pub sizes: Vec<usize>,
}

/// Output size of [`run_reference`] on `h` over seeds `seed + 1 ..= seed + reps`.
pub fn greedy_mean(h: &Hypergraph, kind: ProcessKind, reps: usize, seed: u64) -> Result<GreedyStats, OracleError> {
    if reps == 0 {
        return Err(OracleError::InvalidParameters("reps must be at least 1".into()));
    }
    let sizes: Vec<usize> = (1..=reps as u64)
        .map(|i| run_reference(h, kind, seed.wrapping_add(i)).output.len())
        .collect();
    let mean = sizes.iter().sum::<usize>() as f64 / reps as f64;
    let var = if reps > 1 {
        sizes.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / (reps - 1) as f64
    } else {
        0.0
    };
    Ok(GreedyStats {
        mean,
        std_error: (var / reps as f64).sqrt(),
        sizes,
    })
}
