//! Symbolic certificates for the two combinatorial halves of the argument
//! that the minors cut out exactly the Veronese image.
//!
//! * [`Step1Certificate`]: if every pure-power coordinate vanishes, minor
//!   vanishing forces all coordinates to vanish, so the charts `W_i` cover `W`.
//!   Each step zeroes one coordinate through a minor `z_a z_c - z_t^2` whose
//!   factor `z_a` is already known to vanish.
//! * [`Step3Chain`]: on chart `W_i`, the identity
//!   `prod_j z_{(d-1)e_i + e_j}^{m_j} = z_{d e_i}^{d-1} z_m` as a sequence of
//!   factor exchanges, each licensed by one minor with three of its entries in
//!   row `i` or the column of `z_{d e_i}`.
//!
//! Both are point-independent and are checked structurally; rewrite chains are
//! also checked numerically at points of `W_i`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::Binomial2;
use crate::multiindex::{coord_name, MultiIndex, VeroneseContext};
use crate::projective::{Field, ProjectivePoint};
use crate::veronese::{ChartIndex, Veronese};

/// Why a certificate was rejected. `step` is the 0-based index of the first
/// failing step, when the failure belongs to one.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}{reason}", step.map(|s| format!("step {s}: ")).unwrap_or_default())]
pub struct VerifyFailure {
    pub step: Option<usize>,
    pub reason: String,
}

impl VerifyFailure {
    fn at(step: usize, reason: impl Into<String>) -> Self {
        Self {
            step: Some(step),
            reason: reason.into(),
        }
    }

    fn global(reason: impl Into<String>) -> Self {
        Self {
            step: None,
            reason: reason.into(),
        }
    }
}

/// One zero-propagation step: `minor` vanishes, a factor on the side without
/// `target` is already zero, so `target^2 = 0` and `target = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step1Step {
    /// Row of `M` on which the target sits after its row's pure power.
    pub row: usize,
    #[serde(with = "coord_name")]
    pub target: MultiIndex,
    pub minor: Binomial2,
    #[serde(with = "coord_name::seq")]
    pub prerequisites: Vec<MultiIndex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step1Certificate {
    pub n: usize,
    pub d: u32,
    pub steps: Vec<Step1Step>,
}

/// Replace the factors `replace` of the running product by `with`; the two
/// pairs are the two sides of `minor`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteStep {
    pub minor: Binomial2,
    #[serde(with = "coord_name::seq")]
    pub replace: Vec<MultiIndex>,
    #[serde(with = "coord_name::seq")]
    pub with: Vec<MultiIndex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step3Chain {
    pub n: usize,
    pub d: u32,
    pub chart: usize,
    #[serde(with = "coord_name")]
    pub target: MultiIndex,
    pub steps: Vec<RewriteStep>,
}

fn unit_column_entry(ctx: &VeroneseContext, i: usize, j: usize) -> MultiIndex {
    let mut exps = vec![0; ctx.nvars()];
    exps[i] = ctx.d() - 1;
    exps[j] += 1;
    MultiIndex::new(exps)
}

impl Step3Chain {
    /// Factors of `prod_j z_{(d-1)e_i + e_j}^{m_j}`, sorted descending.
    pub fn lhs(&self, ctx: &VeroneseContext) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for (j, &e) in self.target.exponents().iter().enumerate() {
            for _ in 0..e {
                out.push(unit_column_entry(ctx, self.chart, j));
            }
        }
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    /// Factors of `z_{d e_i}^{d-1} z_m`, sorted descending.
    pub fn rhs(&self, ctx: &VeroneseContext) -> Vec<MultiIndex> {
        let mut out = vec![ctx.pure_power(self.chart); ctx.d() as usize - 1];
        out.push(self.target.clone());
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    /// The certified identity as text, e.g. `z_{2,1}^3 = z_{3,0}^2 z_{0,3}`.
    pub fn identity_string(&self, ctx: &VeroneseContext) -> String {
        format!(
            "{} = {}",
            render_monomial(&self.lhs(ctx)),
            render_monomial(&self.rhs(ctx))
        )
    }
}

fn render_monomial(factors: &[MultiIndex]) -> String {
    let mut parts = Vec::new();
    let mut k = 0;
    while k < factors.len() {
        let run = factors[k..]
            .iter()
            .take_while(|f| **f == factors[k])
            .count();
        parts.push(match run {
            1 => factors[k].coord_name(),
            _ => format!("{}^{run}", factors[k].coord_name()),
        });
        k += run;
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join(" ")
    }
}

fn sorted_desc(mut v: Vec<MultiIndex>) -> Vec<MultiIndex> {
    v.sort_by(|a, b| b.cmp(a));
    v
}

impl Veronese {
    /// The zero-propagation cascade: rows `t = 0 .. n-1` in order and, on row
    /// `t`, the entries after `z_{d e_t}` left to right. For such an entry `m`
    /// with last nonzero position `k > t`, the minor on rows `t, k` gives
    /// `z_{m + e_t - e_k} z_{m - e_t + e_k} - z_m^2`; the first factor sits
    /// earlier on row `t`. Entries before `z_{d e_t}` already appear on an
    /// earlier row and need no step.
    pub fn step1_certificate(&self) -> Step1Certificate {
        let ctx = self.ctx();
        let mut steps = Vec::new();
        for t in 0..ctx.n() {
            let pure = ctx.pure_power(t);
            for m in &self.matrix().rows()[t] {
                if *m >= pure {
                    continue;
                }
                let k = m.last_support().expect("degree >= 1");
                debug_assert!(k > t);
                let earlier = m.exchange(k, t).expect("x_k divides m");
                let later = m.exchange(t, k).expect("x_t divides m");
                let minor = Binomial2::new(earlier.clone(), later, m.clone(), m.clone())
                    .expect("balanced")
                    .expect("nonzero");
                steps.push(Step1Step {
                    row: t,
                    target: m.clone(),
                    minor,
                    prerequisites: vec![earlier],
                });
            }
        }
        Step1Certificate {
            n: ctx.n(),
            d: ctx.d(),
            steps,
        }
    }

    /// Replays a zero-propagation certificate: every minor belongs to the minor set,
    /// every prerequisite is a pure power or an earlier target, each minor has
    /// the shape `z_p z_b - z_target^2` with `p` a prerequisite, and the pure
    /// powers together with the targets exhaust the coordinates.
    pub fn verify_step1(&self, cert: &Step1Certificate) -> Result<(), VerifyFailure> {
        let ctx = self.ctx();
        if (cert.n, cert.d) != (ctx.n(), ctx.d()) {
            return Err(VerifyFailure::global(format!(
                "certificate is for n = {}, d = {}, expected n = {}, d = {}",
                cert.n,
                cert.d,
                ctx.n(),
                ctx.d()
            )));
        }
        let mut zero: BTreeSet<MultiIndex> = (0..ctx.nvars()).map(|i| ctx.pure_power(i)).collect();
        for (s, step) in cert.steps.iter().enumerate() {
            if !self.minors().contains(&step.minor) {
                return Err(VerifyFailure::at(
                    s,
                    format!("{} is not a 2-minor of M", step.minor),
                ));
            }
            if let Some(p) = step.prerequisites.iter().find(|p| !zero.contains(p)) {
                return Err(VerifyFailure::at(
                    s,
                    format!("prerequisite {} is not yet known to vanish", p.coord_name()),
                ));
            }
            let square = [step.target.clone(), step.target.clone()];
            let other = if step.minor.pos() == &square {
                step.minor.neg()
            } else if step.minor.neg() == &square {
                step.minor.pos()
            } else {
                return Err(VerifyFailure::at(
                    s,
                    format!("{} has no side {}^2", step.minor, step.target.coord_name()),
                ));
            };
            if !other.iter().any(|f| step.prerequisites.contains(f)) {
                return Err(VerifyFailure::at(
                    s,
                    format!(
                        "no factor of {} {} is a prerequisite",
                        other[0].coord_name(),
                        other[1].coord_name()
                    ),
                ));
            }
            zero.insert(step.target.clone());
        }
        let missing: Vec<String> = self
            .monomials()
            .iter()
            .filter(|m| !zero.contains(m))
            .map(MultiIndex::coord_name)
            .collect();
        if !missing.is_empty() {
            return Err(VerifyFailure::global(format!(
                "coordinates not forced to vanish: {}",
                missing.join(", ")
            )));
        }
        Ok(())
    }

    /// The rewrite chain for `prod_j z_{(d-1)e_i + e_j}^{m_j} = z_{d e_i}^{d-1} z_m`
    /// on chart `i`. Positions `j != i` are consumed from the last to the first;
    /// the first consumed factor seeds an accumulator `w`, and every further
    /// factor `u_j = z_{(d-1)e_i + e_j}` is exchanged via
    /// `u_j w -> z_{d e_i} z_{w - e_i + e_j}`, the minor on rows `i, j` and the
    /// columns of `z_{d e_i}` and `w`.
    pub fn step3_chain(
        &self,
        chart: ChartIndex,
        m: &MultiIndex,
    ) -> crate::error::Result<Step3Chain> {
        let ctx = self.ctx();
        let i = chart.0;
        if i >= ctx.nvars() {
            return Err(crate::error::Error::Contract(format!(
                "chart {i} out of range"
            )));
        }
        if m.nvars() != ctx.nvars() || m.degree() != ctx.d() {
            return Err(crate::error::Error::Contract(format!(
                "{m} is not a degree-{} multi-index in {} variables",
                ctx.d(),
                ctx.nvars()
            )));
        }
        let pure = ctx.pure_power(i);
        let mut steps = Vec::new();
        let mut acc: Option<MultiIndex> = None;
        for j in (0..ctx.nvars()).rev().filter(|&j| j != i) {
            let u = unit_column_entry(ctx, i, j);
            for _ in 0..m.get(j) {
                acc = Some(match acc.take() {
                    None => u.clone(),
                    Some(w) => {
                        let next = w.exchange(i, j).expect("accumulator keeps x_i");
                        let minor =
                            Binomial2::new(u.clone(), w.clone(), pure.clone(), next.clone())
                                .expect("balanced")
                                .expect("nonzero");
                        steps.push(RewriteStep {
                            minor,
                            replace: sorted_desc(vec![u.clone(), w]),
                            with: sorted_desc(vec![pure.clone(), next.clone()]),
                        });
                        next
                    }
                });
            }
        }
        Ok(Step3Chain {
            n: ctx.n(),
            d: ctx.d(),
            chart: i,
            target: m.clone(),
            steps,
        })
    }

    /// Checks that `minor` can be read as `z_{d e_i} z_y - z_{u_r} z_x` on rows
    /// `i, r` and the columns of `z_{d e_i}` and `x`: three of its four entries
    /// lie in row `i` or the column holding `z_{d e_i}`.
    fn anchored_on_chart(&self, minor: &Binomial2, i: usize) -> bool {
        let ctx = self.ctx();
        let pure = ctx.pure_power(i);
        for [side, other] in [[minor.pos(), minor.neg()], [minor.neg(), minor.pos()]] {
            let y = if side[0] == pure {
                &side[1]
            } else if side[1] == pure {
                &side[0]
            } else {
                continue;
            };
            for (u, x) in [(&other[0], &other[1]), (&other[1], &other[0])] {
                let Some(r) =
                    (0..ctx.nvars()).find(|&r| r != i && *u == unit_column_entry(ctx, i, r))
                else {
                    continue;
                };
                if x.get(i) >= 1 && x.exchange(i, r).as_ref() == Some(y) {
                    return true;
                }
            }
        }
        false
    }

    /// Structural check of a rewrite chain: minor membership, the
    /// three-entries rule, and the telescoping of factor multisets from the
    /// left-hand product to the right-hand product.
    pub fn verify_step3_structure(&self, chain: &Step3Chain) -> Result<(), VerifyFailure> {
        let ctx = self.ctx();
        if (chain.n, chain.d) != (ctx.n(), ctx.d()) {
            return Err(VerifyFailure::global(format!(
                "chain is for n = {}, d = {}, expected n = {}, d = {}",
                chain.n,
                chain.d,
                ctx.n(),
                ctx.d()
            )));
        }
        if chain.chart >= ctx.nvars() {
            return Err(VerifyFailure::global(format!(
                "chart {} out of range",
                chain.chart
            )));
        }
        if chain.target.nvars() != ctx.nvars() || chain.target.degree() != ctx.d() {
            return Err(VerifyFailure::global(format!(
                "target {} is not a degree-{} coordinate",
                chain.target,
                ctx.d()
            )));
        }
        let mut product = chain.lhs(ctx);
        for (s, step) in chain.steps.iter().enumerate() {
            if !self.minors().contains(&step.minor) {
                return Err(VerifyFailure::at(
                    s,
                    format!("{} is not a 2-minor of M", step.minor),
                ));
            }
            if !self.anchored_on_chart(&step.minor, chain.chart) {
                return Err(VerifyFailure::at(
                    s,
                    format!(
                        "{} does not have three entries in row {} and the column of {}",
                        step.minor,
                        chain.chart,
                        ctx.pure_power(chain.chart).coord_name()
                    ),
                ));
            }
            let (replace, with) = match (step.replace.as_slice(), step.with.as_slice()) {
                ([a, b], [c, e]) => ([a, b], [c, e]),
                _ => {
                    return Err(VerifyFailure::at(
                        s,
                        "a rewrite exchanges exactly two factors",
                    ))
                }
            };
            if step
                .minor
                .other_side(replace[0], replace[1])
                .map(|o| o.iter().collect::<Vec<_>>())
                != Some(
                    sorted_desc(vec![with[0].clone(), with[1].clone()])
                        .iter()
                        .collect(),
                )
            {
                return Err(VerifyFailure::at(
                    s,
                    format!("rewrite is not licensed by {}", step.minor),
                ));
            }
            for f in replace {
                let Some(k) = product.iter().position(|p| p == f) else {
                    return Err(VerifyFailure::at(
                        s,
                        format!("factor {} is not in the running product", f.coord_name()),
                    ));
                };
                product.remove(k);
            }
            product.extend(with.iter().map(|f| (*f).clone()));
            product = sorted_desc(product);
        }
        let rhs = chain.rhs(ctx);
        if product != rhs {
            return Err(VerifyFailure::global(format!(
                "chain ends at {} instead of {}",
                render_monomial(&product),
                render_monomial(&rhs)
            )));
        }
        Ok(())
    }

    /// Structural check plus exact evaluation of both sides at `q`, which must
    /// lie on chart `W_i`.
    pub fn verify_step3<F: Field>(
        &self,
        field: &F,
        chain: &Step3Chain,
        q: &ProjectivePoint<F::Elem>,
    ) -> Result<(), VerifyFailure> {
        self.verify_step3_structure(chain)?;
        let ctx = self.ctx();
        if q.dim() != ctx.ambient_dim() {
            return Err(VerifyFailure::global(format!(
                "point lives in P^{}, expected P^{}",
                q.dim(),
                ctx.ambient_dim()
            )));
        }
        let z = q.coords();
        if field.is_zero(&z[self.pure_power_index(chain.chart)]) {
            return Err(VerifyFailure::global(format!(
                "precondition violated: {} vanishes, point is not on chart {}",
                ctx.pure_power(chain.chart).coord_name(),
                chain.chart
            )));
        }
        let value = |factors: Vec<MultiIndex>| {
            field.product(
                factors
                    .iter()
                    .map(|f| &z[crate::multiindex::rank(f)])
                    .collect::<Vec<_>>(),
            )
        };
        let lhs = value(chain.lhs(ctx));
        let rhs = value(chain.rhs(ctx));
        if lhs != rhs {
            return Err(VerifyFailure::global(format!(
                "{} fails at the point: {} != {}",
                chain.identity_string(ctx),
                field.render(&lhs),
                field.render(&rhs)
            )));
        }
        Ok(())
    }

    /// Chains for every chart and every degree-`d` coordinate, chart-major.
    pub fn all_step3_chains(&self) -> Vec<Step3Chain> {
        (0..self.ctx().nvars())
            .flat_map(|i| {
                self.monomials()
                    .iter()
                    .map(move |m| self.step3_chain(ChartIndex(i), m).expect("valid target"))
            })
            .collect()
    }
}
