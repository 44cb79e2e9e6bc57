//! Perturbations of block-balanced networks: a single inter-subgraph link,
//! and two hostile factions competing for a third group as an ally.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::dynamics::{simulate, ModelKind, SimConfig, Trajectory};
use crate::error::{Error, Result};
use crate::matrix::{AppraisalMatrix, ToleranceConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlockSpec {
    /// `alpha * b * b^T` with `b` a +/-1 vector.
    SignVector { alpha: f64, b: Vec<f64> },
    /// `sign(w) * w^T` with every `w_i` nonzero.
    Weights { w: Vec<f64> },
}

impl BlockSpec {
    fn build(&self) -> Result<AppraisalMatrix> {
        match self {
            Self::SignVector { alpha, b } => {
                if !(*alpha > 0.0) {
                    return Err(Error::ParameterOutOfRange(format!("block alpha {alpha}")));
                }
                if b.iter().any(|v| v.abs() != 1.0) {
                    return Err(Error::ParameterOutOfRange(format!("{b:?} is not a sign vector")));
                }
                AppraisalMatrix::rank_one_balanced(*alpha, b)
            }
            Self::Weights { w } => {
                if w.contains(&0.0) {
                    return Err(Error::ParameterOutOfRange(format!("{w:?} has a zero weight")));
                }
                AppraisalMatrix::sign_outer(w)
            }
        }
    }
}

/// Block-diagonal matrix with one canonical fixed-point block per spec.
pub fn build_block_balanced(blocks: &[BlockSpec]) -> Result<AppraisalMatrix> {
    let built = blocks.iter().map(BlockSpec::build).collect::<Result<Vec<_>>>()?;
    AppraisalMatrix::block_diagonal(&built)
}

/// Returns `X` with `X_ij = eta` (and `X_ji = eta` when `bilateral`).
pub fn apply_single_link(
    x: &AppraisalMatrix,
    i: usize,
    j: usize,
    eta: f64,
    bilateral: bool,
) -> Result<AppraisalMatrix> {
    if i == j {
        return Err(Error::ParameterOutOfRange(format!("link endpoints coincide at {i}")));
    }
    let y = x.with_entry(i, j, eta)?;
    if bilateral {
        y.with_entry(j, i, eta)
    } else {
        Ok(y)
    }
}

/// Two isolated subgraphs `V1 u V2` and `V3 u V4`, each made of two
/// antagonistic factions.
#[derive(Clone, Debug)]
pub struct TwoSubgraphBase {
    pub x: AppraisalMatrix,
    pub groups: [Range<usize>; 4],
}

pub fn two_subgraph_base(sizes: [usize; 4], alphas: [f64; 2]) -> Result<TwoSubgraphBase> {
    if sizes.contains(&0) {
        return Err(Error::ParameterOutOfRange("faction sizes must be positive".into()));
    }
    let signs = |a: usize, b: usize| {
        std::iter::repeat_n(1.0, a)
            .chain(std::iter::repeat_n(-1.0, b))
            .collect::<Vec<_>>()
    };
    let x = build_block_balanced(&[
        BlockSpec::SignVector {
            alpha: alphas[0],
            b: signs(sizes[0], sizes[1]),
        },
        BlockSpec::SignVector {
            alpha: alphas[1],
            b: signs(sizes[2], sizes[3]),
        },
    ])?;
    let mut start = 0;
    let groups = sizes.map(|s| {
        let r = start..start + s;
        start += s;
        r
    });
    Ok(TwoSubgraphBase { x, groups })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AllyParams {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub alpha: f64,
    pub alpha_hat: f64,
    pub eps1: f64,
    pub eps2: f64,
}

/// Outcomes predicted by the ally-competition inequalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AllyPredictions {
    /// `eps1 n1 > eps2 n2`: V1 ends up with V2 or V3 as an ally.
    pub v1_gains_ally: bool,
    /// `eps2 n2 > eps1 n1`.
    pub v2_gains_ally: bool,
    /// `eps1 n1 - eps2 n2 >= alpha_hat eps2 n3 / alpha` and
    /// `eps1 eps2 n3 <= alpha^2 (n1 + n2)`.
    pub v1_allies_v3: bool,
    pub v2_allies_v3: bool,
    /// `eps1 eps2 n3 <= alpha^2 (n1 + n2)`.
    pub v3_gains_ally: bool,
    /// Any of the three mediation conditions: no negative link survives.
    pub all_friendly: bool,
}

impl AllyParams {
    pub fn validate(&self) -> Result<()> {
        if self.n1 == 0 || self.n2 == 0 || self.n3 == 0 {
            return Err(Error::ParameterOutOfRange("group sizes must be positive".into()));
        }
        for (name, v) in [
            ("alpha", self.alpha),
            ("alpha_hat", self.alpha_hat),
            ("eps1", self.eps1),
            ("eps2", self.eps2),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::ParameterOutOfRange(format!("{name} = {v} must be positive")));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n1 + self.n2 + self.n3
    }

    pub fn groups(&self) -> [Range<usize>; 3] {
        let (a, b) = (self.n1, self.n1 + self.n2);
        [0..a, a..b, b..self.n()]
    }

    /// Parameters with the roles of V1 and V2 exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            n1: self.n2,
            n2: self.n1,
            eps1: self.eps2,
            eps2: self.eps1,
            ..*self
        }
    }

    /// The initial network: `alpha b b^T` on `V1 u V2`, `alpha_hat` on `V3`,
    /// and bilateral links of weight `eps1` (`eps2`) between V1 (V2) and V3.
    pub fn initial_state(&self) -> Result<AppraisalMatrix> {
        self.validate()?;
        let [v1, v2, _] = self.groups();
        let group = |i: usize| {
            if v1.contains(&i) {
                0
            } else if v2.contains(&i) {
                1
            } else {
                2
            }
        };
        AppraisalMatrix::from_fn(self.n(), |i, j| match (group(i), group(j)) {
            (0, 0) | (1, 1) => self.alpha,
            (0, 1) | (1, 0) => -self.alpha,
            (2, 2) => self.alpha_hat,
            (0, 2) | (2, 0) => self.eps1,
            _ => self.eps2,
        })
    }

    pub fn predictions(&self) -> AllyPredictions {
        let (n1, n2, n3) = (self.n1 as f64, self.n2 as f64, self.n3 as f64);
        let effort1 = self.eps1 * n1;
        let effort2 = self.eps2 * n2;
        let gap = effort1 - effort2;
        let same = gap.abs() <= 1e-12 * effort1.max(effort2);
        let mediation = self.eps1 * self.eps2 * n3;
        let conflict = self.alpha * self.alpha * (n1 + n2);
        let v3_gains_ally = mediation <= conflict;
        let mediated = mediation >= conflict;
        AllyPredictions {
            v1_gains_ally: !same && gap > 0.0,
            v2_gains_ally: !same && gap < 0.0,
            v1_allies_v3: gap >= self.alpha_hat * self.eps2 * n3 / self.alpha && v3_gains_ally,
            v2_allies_v3: -gap >= self.alpha_hat * self.eps1 * n3 / self.alpha && v3_gains_ally,
            v3_gains_ally,
            all_friendly: mediated
                && (same
                    || (gap > 0.0 && gap <= self.eps2 * self.alpha_hat * n3)
                    || (-gap > 0.0 && -gap <= self.eps1 * self.alpha_hat * n3)),
        }
    }
}

pub fn ally_competition_scenario(params: &AllyParams) -> Result<(AppraisalMatrix, AllyPredictions)> {
    Ok((params.initial_state()?, params.predictions()))
}

#[derive(Clone, Debug)]
pub enum PerturbationScenario {
    SingleLink {
        base: AppraisalMatrix,
        from: usize,
        to: usize,
        eta: f64,
        bilateral: bool,
    },
    AllyCompetition(AllyParams),
}

impl PerturbationScenario {
    pub fn initial_state(&self) -> Result<AppraisalMatrix> {
        match self {
            Self::SingleLink {
                base,
                from,
                to,
                eta,
                bilateral,
            } => {
                if *eta == 0.0 {
                    return Err(Error::ParameterOutOfRange("link weight must be nonzero".into()));
                }
                apply_single_link(base, *from, *to, *eta, *bilateral)
            }
            Self::AllyCompetition(p) => p.initial_state(),
        }
    }

    /// Evolves the perturbed network under the homophily model.
    pub fn run(&self, cfg: &SimConfig, tol: &ToleranceConfig) -> Result<Trajectory> {
        simulate(&self.initial_state()?, ModelKind::Hbm, cfg, tol)
    }
}

/// Every appraisal between the two node sets (both directions) has sign
/// `sign`, beyond the zero threshold.
pub fn relation_is(
    x: &AppraisalMatrix,
    a: Range<usize>,
    b: Range<usize>,
    sign: f64,
    tol: &ToleranceConfig,
) -> bool {
    let thr = tol.zero_threshold(x);
    a.clone().all(|i| {
        b.clone()
            .all(|j| x.get(i, j) * sign > thr && x.get(j, i) * sign > thr)
    })
}
