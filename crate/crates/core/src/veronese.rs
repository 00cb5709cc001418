//! The Veronese map `nu_d : P^n -> P^N`, membership in the variety `W` cut
//! out by the 2-minors, the charts `W_i`, and the inverse morphism built by
//! reading one column of the matrix.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::matrix::{build_matrix, minors2, Binomial2, SymbolicMatrix};
use crate::multiindex::{enumerate_monomials, rank, MultiIndex, VeroneseContext};
use crate::projective::{normalize, proportional, Field, ProjectivePoint};

/// Chart `W_i`: the points of `W` whose pure-power coordinate `z_{d e_i}` is nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChartIndex(pub usize);

/// Flat coordinate positions of the four factors of `z_a z_b - z_c z_e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompiledBinomial {
    pub pos: [usize; 2],
    pub neg: [usize; 2],
}

impl CompiledBinomial {
    pub fn new(b: &Binomial2) -> Self {
        Self {
            pos: [rank(&b.pos()[0]), rank(&b.pos()[1])],
            neg: [rank(&b.neg()[0]), rank(&b.neg()[1])],
        }
    }

    pub fn eval<F: Field>(&self, field: &F, z: &[F::Elem]) -> F::Elem {
        let p = field.mul(&z[self.pos[0]], &z[self.pos[1]]);
        let n = field.mul(&z[self.neg[0]], &z[self.neg[1]]);
        field.sub(&p, &n)
    }

    pub fn vanishes<F: Field>(&self, field: &F, z: &[F::Elem]) -> bool {
        field.mul(&z[self.pos[0]], &z[self.pos[1]]) == field.mul(&z[self.neg[0]], &z[self.neg[1]])
    }
}

/// Everything derived from one `(n, d)`: the matrix, its minors, and the
/// coordinate positions needed to evaluate them. Built once, shared read-only.
#[derive(Debug, Clone)]
pub struct Veronese {
    ctx: VeroneseContext,
    matrix: SymbolicMatrix,
    monomials: Vec<MultiIndex>,
    minors: BTreeSet<Binomial2>,
    compiled: Vec<CompiledBinomial>,
    pure_powers: Vec<usize>,
    // chart_columns[i][j] = flat index of z_{(d-1) e_i + e_j}
    chart_columns: Vec<Vec<usize>>,
}

impl Veronese {
    pub fn new(ctx: &VeroneseContext) -> Result<Self> {
        let matrix = build_matrix(ctx)?;
        let monomials = enumerate_monomials(ctx.n(), ctx.d());
        let minors = minors2(&matrix);
        let compiled = minors.iter().map(CompiledBinomial::new).collect();
        let pure_powers = (0..ctx.nvars()).map(|i| rank(&ctx.pure_power(i))).collect();
        let chart_columns = (0..ctx.nvars())
            .map(|i| {
                let col = matrix.pure_power_column(i);
                matrix.column(col).iter().map(rank).collect()
            })
            .collect();
        Ok(Self {
            ctx: ctx.clone(),
            matrix,
            monomials,
            minors,
            compiled,
            pure_powers,
            chart_columns,
        })
    }

    pub fn ctx(&self) -> &VeroneseContext {
        &self.ctx
    }

    pub fn matrix(&self) -> &SymbolicMatrix {
        &self.matrix
    }

    /// Degree-`d` multi-indices in flat coordinate order.
    pub fn monomials(&self) -> &[MultiIndex] {
        &self.monomials
    }

    pub fn minors(&self) -> &BTreeSet<Binomial2> {
        &self.minors
    }

    pub fn compiled_minors(&self) -> &[CompiledBinomial] {
        &self.compiled
    }

    /// Flat index of `z_{d e_i}`.
    pub fn pure_power_index(&self, i: usize) -> usize {
        self.pure_powers[i]
    }

    /// Flat indices of the column of `M` that holds `z_{d e_i}`.
    pub fn chart_column(&self, i: usize) -> &[usize] {
        &self.chart_columns[i]
    }

    fn check_source<E: Clone>(&self, x: &ProjectivePoint<E>) -> Result<()> {
        if x.dim() != self.ctx.n() {
            return Err(Error::Contract(format!(
                "expected a point of P^{}, got P^{}",
                self.ctx.n(),
                x.dim()
            )));
        }
        Ok(())
    }

    fn check_target<E: Clone>(&self, q: &ProjectivePoint<E>) -> Result<()> {
        if q.dim() != self.ctx.ambient_dim() {
            return Err(Error::Contract(format!(
                "expected a point of P^{}, got P^{}",
                self.ctx.ambient_dim(),
                q.dim()
            )));
        }
        Ok(())
    }

    /// All degree-`d` monomials of `x`, unnormalized, in flat coordinate order.
    pub fn eval_coords<F: Field>(&self, field: &F, x: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(x.len(), self.ctx.nvars(), "source vector length");
        let d = self.ctx.d() as usize;
        let powers: Vec<Vec<F::Elem>> = x
            .iter()
            .map(|xi| {
                let mut pw = Vec::with_capacity(d + 1);
                pw.push(field.one());
                for k in 0..d {
                    pw.push(field.mul(&pw[k], xi));
                }
                pw
            })
            .collect();
        self.monomials
            .iter()
            .map(|m| {
                m.exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .fold(field.one(), |acc, (j, &e)| {
                        field.mul(&acc, &powers[j][e as usize])
                    })
            })
            .collect()
    }

    /// `nu_d(x)`: the coordinate at flat index `rank(m)` is `x^m`.
    pub fn eval<F: Field>(
        &self,
        field: &F,
        x: &ProjectivePoint<F::Elem>,
    ) -> Result<ProjectivePoint<F::Elem>> {
        self.check_source(x)?;
        normalize(field, &self.eval_coords(field, x.coords()))
    }

    /// The first minor (in canonical order) that does not vanish at `q`, with its value.
    pub fn first_nonvanishing_minor<F: Field>(
        &self,
        field: &F,
        q: &ProjectivePoint<F::Elem>,
    ) -> Result<Option<(&Binomial2, F::Elem)>> {
        self.check_target(q)?;
        Ok(self
            .minors
            .iter()
            .zip(&self.compiled)
            .find(|(_, c)| !c.vanishes(field, q.coords()))
            .map(|(b, c)| (b, c.eval(field, q.coords()))))
    }

    /// Whether every 2-minor vanishes at `q`.
    pub fn is_on_variety<F: Field>(&self, field: &F, q: &ProjectivePoint<F::Elem>) -> Result<bool> {
        Ok(self.first_nonvanishing_minor(field, q)?.is_none())
    }

    /// Unchecked membership on raw coordinates, for the brute-force loops.
    pub fn minors_vanish<F: Field>(&self, field: &F, z: &[F::Elem]) -> bool {
        self.compiled.iter().all(|c| c.vanishes(field, z))
    }

    /// Smallest `i` with `z_{d e_i} != 0` at `q`.
    pub fn chart_select<F: Field>(
        &self,
        field: &F,
        q: &ProjectivePoint<F::Elem>,
    ) -> Result<ChartIndex> {
        self.check_target(q)?;
        self.pure_powers
            .iter()
            .position(|&k| !field.is_zero(&q.coords()[k]))
            .map(ChartIndex)
            .ok_or(Error::NoChart)
    }

    /// `phi_i(q)`: the column of `M` containing `z_{d e_i}`, read at `q`.
    pub fn chart_map<F: Field>(
        &self,
        field: &F,
        chart: ChartIndex,
        q: &ProjectivePoint<F::Elem>,
    ) -> Result<ProjectivePoint<F::Elem>> {
        self.check_target(q)?;
        if chart.0 >= self.ctx.nvars() {
            return Err(Error::Contract(format!("chart {} out of range", chart.0)));
        }
        if field.is_zero(&q.coords()[self.pure_powers[chart.0]]) {
            return Err(Error::NoChart);
        }
        let column: Vec<F::Elem> = self.chart_columns[chart.0]
            .iter()
            .map(|&k| q.coords()[k].clone())
            .collect();
        normalize(field, &column)
    }

    /// The inverse morphism `phi`, on the chart chosen by [`Self::chart_select`].
    /// Trusts that `q` lies on `W`.
    pub fn inverse_map<F: Field>(
        &self,
        field: &F,
        q: &ProjectivePoint<F::Elem>,
    ) -> Result<ProjectivePoint<F::Elem>> {
        let chart = self.chart_select(field, q)?;
        self.chart_map(field, chart, q)
    }

    /// [`Self::inverse_map`] after confirming membership in `W`.
    pub fn inverse_map_checked<F: Field>(
        &self,
        field: &F,
        q: &ProjectivePoint<F::Elem>,
    ) -> Result<ProjectivePoint<F::Elem>> {
        if let Some((minor, value)) = self.first_nonvanishing_minor(field, q)? {
            return Err(Error::NotOnVariety(format!(
                "minor {minor} evaluates to {}",
                field.render(&value)
            )));
        }
        self.inverse_map(field, q)
    }

    /// Whether `phi_i(q)` and `phi_j(q)` name the same point; both charts
    /// must be available at `q`.
    pub fn charts_agree<F: Field>(
        &self,
        field: &F,
        i: ChartIndex,
        j: ChartIndex,
        q: &ProjectivePoint<F::Elem>,
    ) -> Result<bool> {
        let a = self.chart_map(field, i, q)?;
        let b = self.chart_map(field, j, q)?;
        proportional(field, a.coords(), b.coords())
    }

    /// Charts available at `q`.
    pub fn charts_at<F: Field>(&self, field: &F, q: &ProjectivePoint<F::Elem>) -> Vec<ChartIndex> {
        self.pure_powers
            .iter()
            .enumerate()
            .filter(|(_, &k)| !field.is_zero(&q.coords()[k]))
            .map(|(i, _)| ChartIndex(i))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::{parse_point, render_point, PrimeField, Rationals};
    use num_rational::BigRational;

    fn ver(n: usize, d: u32) -> Veronese {
        Veronese::new(&VeroneseContext::new(n, d).unwrap()).unwrap()
    }

    fn qp(s: &str) -> ProjectivePoint<BigRational> {
        parse_point(&Rationals, s).unwrap()
    }

    #[test]
    fn eval_nu3_symbolic_order() {
        // distinct primes make each monomial value identify its exponents
        let v = ver(2, 3);
        let x: Vec<BigRational> = [2, 3, 5].iter().map(|&k| Rationals.from_i64(k)).collect();
        let z = v.eval_coords(&Rationals, &x);
        let want: Vec<i64> = vec![8, 12, 20, 18, 30, 50, 27, 45, 75, 125];
        let want: Vec<BigRational> = want.into_iter().map(|k| Rationals.from_i64(k)).collect();
        assert_eq!(z, want);
    }

    #[test]
    fn eval_examples() {
        let v = ver(1, 2);
        assert_eq!(
            render_point(&Rationals, &v.eval(&Rationals, &qp("[1 : 0]")).unwrap()),
            "[1 : 0 : 0]"
        );
        let v = ver(1, 3);
        assert_eq!(
            render_point(&Rationals, &v.eval(&Rationals, &qp("[1 : 2]")).unwrap()),
            "[1 : 2 : 4 : 8]"
        );
        assert!(v.eval(&Rationals, &qp("[1 : 2 : 3]")).is_err());
    }

    #[test]
    fn membership_examples() {
        let v = ver(1, 2);
        assert!(!v.is_on_variety(&Rationals, &qp("[0 : 1 : 0]")).unwrap());
        let (minor, value) = v
            .first_nonvanishing_minor(&Rationals, &qp("[0 : 1 : 0]"))
            .unwrap()
            .unwrap();
        assert_eq!(minor.to_string(), "z_{2,0} z_{0,2} - z_{1,1}^2");
        assert_eq!(Rationals.render(&value), "-1");
        let v = ver(2, 2);
        assert_eq!(v.minors().len(), 6);
        let q = qp("[1 : 1 : 1 : 1 : 1 : 2]");
        let nonzero = v
            .compiled_minors()
            .iter()
            .filter(|c| !c.vanishes(&Rationals, q.coords()))
            .count();
        assert!(nonzero >= 1);
        assert!(!v.is_on_variety(&Rationals, &q).unwrap());
        assert!(v.is_on_variety(&Rationals, &qp("[1 : 2 : 3]")).is_err());
    }

    #[test]
    fn chart_examples() {
        let v = ver(1, 2);
        let q = v.eval(&Rationals, &qp("[1 : 5]")).unwrap();
        assert_eq!(v.chart_select(&Rationals, &q).unwrap(), ChartIndex(0));
        let q = v.eval(&Rationals, &qp("[0 : 1]")).unwrap();
        assert_eq!(v.chart_select(&Rationals, &q).unwrap(), ChartIndex(1));
        let v = ver(2, 3);
        let q = v.eval(&Rationals, &qp("[0 : 1 : 1]")).unwrap();
        assert_eq!(v.chart_select(&Rationals, &q).unwrap(), ChartIndex(1));
        let v = ver(1, 2);
        assert_eq!(
            v.chart_select(&Rationals, &qp("[0 : 1 : 0]")),
            Err(Error::NoChart)
        );
    }

    #[test]
    fn inverse_examples() {
        let v = ver(1, 3);
        let x = v.inverse_map(&Rationals, &qp("[1 : 2 : 4 : 8]")).unwrap();
        assert_eq!(render_point(&Rationals, &x), "[1 : 2]");
        let v = ver(2, 3);
        let q = v.eval(&Rationals, &qp("[0 : 0 : 1]")).unwrap();
        assert_eq!(v.chart_select(&Rationals, &q).unwrap(), ChartIndex(2));
        assert_eq!(v.chart_column(2), &[5, 8, 9]);
        assert_eq!(
            render_point(&Rationals, &v.inverse_map(&Rationals, &q).unwrap()),
            "[0 : 0 : 1]"
        );
        let v = ver(1, 2);
        let x = v.inverse_map(&Rationals, &qp("[1 : -3 : 9]")).unwrap();
        assert_eq!(render_point(&Rationals, &x), "[1 : -3]");
    }

    #[test]
    fn checked_inverse_rejects_non_members() {
        let v = ver(1, 2);
        match v.inverse_map_checked(&Rationals, &qp("[1 : 1 : 0]")) {
            Err(Error::NotOnVariety(msg)) => assert!(msg.contains("z_{2,0} z_{0,2} - z_{1,1}^2")),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            v.inverse_map(&Rationals, &qp("[0 : 1 : 0]")),
            Err(Error::NoChart)
        );
    }

    #[test]
    fn degree_one_is_identity() {
        let v = ver(2, 1);
        assert!(v.minors().is_empty());
        let f = PrimeField::new(5).unwrap();
        let q = parse_point(&f, "[0 : 3 : 1]").unwrap();
        assert!(v.is_on_variety(&f, &q).unwrap());
        assert_eq!(v.inverse_map(&f, &q).unwrap(), q);
    }

    #[test]
    fn charts_agree_on_image() {
        let v = ver(2, 3);
        let q = v.eval(&Rationals, &qp("[2 : -1 : 3/7]")).unwrap();
        let charts = v.charts_at(&Rationals, &q);
        assert_eq!(charts.len(), 3);
        for &i in &charts {
            for &j in &charts {
                assert!(v.charts_agree(&Rationals, i, j, &q).unwrap());
            }
        }
    }
}
