//! Structural balance checks, isolated components, faction partitions and
//! classification against the fixed-point sets of both models.

use serde::{Deserialize, Serialize};

use crate::matrix::{sign_with, AppraisalMatrix, ToleranceConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BalanceMethod {
    /// Positive diagonal plus every triad sign product equal to +1. O(n^3).
    TriadS1S2,
    /// Positive diagonal plus every row sign pattern equal to +/- the first
    /// row's. O(n^2).
    RowSignS1S3,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    ZeroEntry { i: usize, j: usize },
    NonPositiveDiagonal { i: usize },
    Triad { i: usize, j: usize, k: usize },
    RowPair { i: usize, j: usize },
}

/// Component membership plus faction labels within each component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactionPartition {
    pub component_of: Vec<usize>,
    pub faction_of: Vec<usize>,
}

impl FactionPartition {
    /// Node sets of every (component, faction) pair, ordered by first member.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut keys: Vec<(usize, usize)> = Vec::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (node, key) in self.component_of.iter().zip(&self.faction_of).enumerate() {
            let key = (*key.0, *key.1);
            match keys.iter().position(|k| *k == key) {
                Some(p) => groups[p].push(node),
                None => {
                    keys.push(key);
                    groups.push(vec![node]);
                }
            }
        }
        groups
    }

    pub fn same_faction(&self, a: usize, b: usize) -> bool {
        self.component_of[a] == self.component_of[b] && self.faction_of[a] == self.faction_of[b]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BalanceReport {
    pub balanced: bool,
    pub method: BalanceMethod,
    pub violations: Vec<Violation>,
    pub factions: Option<FactionPartition>,
}

/// Balance check on a complete signed network using the row-sign criterion.
pub fn is_socially_balanced(x: &AppraisalMatrix, tol: &ToleranceConfig) -> BalanceReport {
    is_socially_balanced_with(x, tol, BalanceMethod::RowSignS1S3)
}

pub fn is_socially_balanced_with(
    x: &AppraisalMatrix,
    tol: &ToleranceConfig,
    method: BalanceMethod,
) -> BalanceReport {
    let thr = tol.zero_threshold(x);
    let nodes: Vec<usize> = (0..x.n()).collect();
    let mut report = balance_on(x, &nodes, thr, method);
    if let Some(f) = report.factions.as_mut() {
        f.component_of = vec![0; x.n()];
    }
    report
}

/// Checks balance of the principal submatrix on `nodes`. Violations carry
/// global indices; `faction_of` is indexed globally but only filled on
/// `nodes`.
fn balance_on(x: &AppraisalMatrix, nodes: &[usize], thr: f64, method: BalanceMethod) -> BalanceReport {
    let s = |a: usize, b: usize| sign_with(x.get(nodes[a], nodes[b]), thr);
    let m = nodes.len();
    let mut violations = Vec::new();
    for a in 0..m {
        for b in 0..m {
            if s(a, b) == 0 {
                violations.push(Violation::ZeroEntry {
                    i: nodes[a],
                    j: nodes[b],
                });
            }
        }
    }
    if violations.is_empty() {
        for a in 0..m {
            if s(a, a) < 0 {
                violations.push(Violation::NonPositiveDiagonal { i: nodes[a] });
            }
        }
        match method {
            BalanceMethod::RowSignS1S3 => {
                for a in 1..m {
                    let flip = s(a, 0) * s(0, 0);
                    if (0..m).any(|c| s(a, c) != flip * s(0, c)) {
                        violations.push(Violation::RowPair {
                            i: nodes[0],
                            j: nodes[a],
                        });
                    }
                }
            }
            BalanceMethod::TriadS1S2 => {
                for a in 0..m {
                    for b in 0..m {
                        for c in 0..m {
                            if s(a, b) * s(b, c) * s(c, a) != 1 {
                                violations.push(Violation::Triad {
                                    i: nodes[a],
                                    j: nodes[b],
                                    k: nodes[c],
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    let balanced = violations.is_empty();
    let factions = balanced.then(|| {
        let mut faction_of = vec![0; x.n()];
        for a in 0..m {
            faction_of[nodes[a]] = usize::from(s(0, a) < 0);
        }
        FactionPartition {
            component_of: vec![0; x.n()],
            faction_of,
        }
    });
    BalanceReport {
        balanced,
        method,
        violations,
        factions,
    }
}

/// Connected components of the undirected graph with an edge wherever either
/// direction is above the zero threshold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Components {
    pub component_of: Vec<usize>,
    /// Node lists per component, ordered by smallest member.
    pub blocks: Vec<Vec<usize>>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.blocks.len()
    }
}

pub fn isolated_components(x: &AppraisalMatrix, tol: &ToleranceConfig) -> Components {
    components_with(x, tol.zero_threshold(x))
}

fn components_with(x: &AppraisalMatrix, thr: f64) -> Components {
    let n = x.n();
    let mut component_of = vec![usize::MAX; n];
    let mut blocks = Vec::new();
    for root in 0..n {
        if component_of[root] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        component_of[root] = id;
        let mut members = vec![root];
        let mut cursor = 0;
        while cursor < members.len() {
            let i = members[cursor];
            cursor += 1;
            for j in 0..n {
                if component_of[j] == usize::MAX
                    && (x.get(i, j).abs() > thr || x.get(j, i).abs() > thr)
                {
                    component_of[j] = id;
                    members.push(j);
                }
            }
        }
        members.sort_unstable();
        blocks.push(members);
    }
    Components {
        component_of,
        blocks,
    }
}

/// Balance of every isolated component, each required to be complete.
pub fn is_balanced_multi(x: &AppraisalMatrix, tol: &ToleranceConfig) -> BalanceReport {
    let thr = tol.zero_threshold(x);
    let comps = components_with(x, thr);
    let mut violations = Vec::new();
    let mut faction_of = vec![0; x.n()];
    for block in &comps.blocks {
        let r = balance_on(x, block, thr, BalanceMethod::RowSignS1S3);
        match r.factions {
            Some(f) => block.iter().for_each(|&i| faction_of[i] = f.faction_of[i]),
            None => violations.extend(r.violations),
        }
    }
    let balanced = violations.is_empty();
    BalanceReport {
        balanced,
        method: BalanceMethod::RowSignS1S3,
        violations,
        factions: balanced.then(|| FactionPartition {
            component_of: comps.component_of,
            faction_of,
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactionCount {
    Count(usize),
    Indeterminate,
}

/// One entry per isolated component: 1 if the balanced component is all
/// positive, 2 if it has two antagonistic factions.
pub fn faction_count(x: &AppraisalMatrix, tol: &ToleranceConfig) -> Vec<FactionCount> {
    let thr = tol.zero_threshold(x);
    components_with(x, thr)
        .blocks
        .iter()
        .map(|block| {
            let r = balance_on(x, block, thr, BalanceMethod::RowSignS1S3);
            match r.factions {
                Some(f) if block.iter().any(|&i| f.faction_of[i] == 1) => FactionCount::Count(2),
                Some(_) => FactionCount::Count(1),
                None => FactionCount::Indeterminate,
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlockParams {
    /// `alpha * b * b^T`
    Hbm { alpha: f64, b: Vec<i8> },
    /// `sign(w) * w^T`
    Ibm { w: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointClass {
    pub member: bool,
    pub partition: Vec<Vec<usize>>,
    pub per_block: Vec<BlockParams>,
    /// Max-norm distance between `X` and the reconstructed canonical matrix.
    pub residual: f64,
    pub rank_one: bool,
}

/// Matches `X` against block-diagonal `alpha b b^T` structure.
pub fn classify_q_hbm(x: &AppraisalMatrix, tol: &ToleranceConfig) -> FixedPointClass {
    classify(x, tol, |x, block| {
        let r0 = block[0];
        let b: Vec<i8> = block.iter().map(|&j| sign_with(x.get(r0, j), 0.0)).collect();
        let alpha = block
            .iter()
            .flat_map(|&i| block.iter().map(move |&j| x.get(i, j).abs()))
            .sum::<f64>()
            / (block.len() * block.len()) as f64;
        let entry = {
            let b = b.clone();
            move |a: usize, c: usize| alpha * f64::from(b[a]) * f64::from(b[c])
        };
        (BlockParams::Hbm { alpha, b }, Box::new(entry))
    })
}

/// Matches `X` against block-diagonal `sign(w) w^T` structure.
pub fn classify_q_ibm(x: &AppraisalMatrix, tol: &ToleranceConfig) -> FixedPointClass {
    classify(x, tol, |x, block| {
        let r0 = block[0];
        // Row r0 equals sign(w_r0) w^T and X_r0r0 > 0, so the row itself is
        // the representative with positive pivot.
        let w: Vec<f64> = block
            .iter()
            .map(|&k| {
                let col_mean = block.iter().map(|&i| x.get(i, k).abs()).sum::<f64>() / block.len() as f64;
                col_mean.copysign(x.get(r0, k))
            })
            .collect();
        let entry = {
            let w = w.clone();
            move |a: usize, c: usize| w[a].signum() * w[c]
        };
        (BlockParams::Ibm { w }, Box::new(entry))
    })
}

type Reconstruct = Box<dyn Fn(usize, usize) -> f64>;

fn classify(
    x: &AppraisalMatrix,
    tol: &ToleranceConfig,
    fit: impl Fn(&AppraisalMatrix, &[usize]) -> (BlockParams, Reconstruct),
) -> FixedPointClass {
    let n = x.n();
    let thr = tol.zero_threshold(x);
    let comps = components_with(x, thr);
    let mut recon = vec![0.0; n * n];
    let mut per_block = Vec::with_capacity(comps.count());
    let mut structural = true;
    for block in &comps.blocks {
        let complete = block
            .iter()
            .all(|&i| x.get(i, i) > thr && block.iter().all(|&j| x.get(i, j).abs() > thr));
        structural &= complete;
        let (params, entry) = fit(x, block);
        for (a, &i) in block.iter().enumerate() {
            for (c, &j) in block.iter().enumerate() {
                recon[i * n + j] = entry(a, c);
            }
        }
        per_block.push(params);
    }
    let residual = x
        .as_slice()
        .iter()
        .zip(&recon)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let member = structural && residual <= tol.residual_bound(x.max_norm());
    FixedPointClass {
        member,
        rank_one: comps.count() == 1,
        partition: comps.blocks,
        per_block,
        residual,
    }
}

/// Sufficient conditions for the homophily model to reach balance after one
/// (`order = 1`) or two (`order = 2`) steps: with `G = X X^T` (resp.
/// `G = (X X^T)^2`), `G_i1 G_1j G_ij > 0` for all `i, j`.
pub fn sufficient_condition_nonvanishing(x: &AppraisalMatrix, order: u8) -> bool {
    let n = x.n();
    let gram = |a: &dyn Fn(usize, usize) -> f64| {
        let mut g = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                g[i * n + j] = (0..n).map(|k| a(i, k) * a(j, k)).sum();
            }
        }
        g
    };
    let g1 = gram(&|i, j| x.get(i, j));
    let g = match order {
        1 => g1,
        2 => gram(&|i, j| g1[i * n + j]),
        _ => return false,
    };
    (0..n).all(|i| (0..n).all(|j| g[i * n] * g[j] * g[i * n + j] > 0.0))
}
