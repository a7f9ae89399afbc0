//! The sl2 operator package on a symplectic model.
//!
//! For a model with symplectic form omega, the operators
//!
//!   * `omega_wedge`   — wedge with omega (raising),
//!   * `poisson_contract` — interior product with the Poisson bivector
//!     (lowering),
//!   * the weight operator `(n - k)` on degree k,
//!
//! generate an sl2 action on forms. Highest-weight forms are *primitive*,
//! and every form decomposes uniquely as a sum of omega-powers against
//! primitive forms. That decomposition drives everything else here: the
//! reflection `reflect`, the power shifts `strip_omega`, the filtration
//! projections `project_filtered` / `project_filtered_dual`, and the split
//! of the differential `d = d_plus + omega ∧ d_minus` on primitives.
//!
//! All per-degree data (primitive bases, decomposition solvers, operator
//! matrices) is computed once at construction; afterwards the structure is
//! immutable and safe to share across threads.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::traits::Zero;

use crate::exterior::{Form, MultiIndex};
use crate::linalg::{Matrix, Solver};
use crate::model::LieModel;
use crate::report::{Counterexample, IdentityReport, IdentityResult};
use crate::scalar::{self, Scalar};

/// Unique expression of a homogeneous degree-`k` form as
/// `sum_j omega^j ∧ beta_{k-2j}` with every `beta` primitive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LefschetzDecomposition {
    degree: usize,
    /// omega-power -> primitive component (keys with zero component absent).
    components: BTreeMap<usize, Form>,
}

impl LefschetzDecomposition {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn component(&self, j: usize) -> Form {
        self.components.get(&j).cloned().unwrap_or_else(Form::zero)
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &Form)> {
        self.components.iter().map(|(j, f)| (*j, f))
    }

    pub fn max_power(&self) -> Option<usize> {
        self.components.keys().max().copied()
    }
}

/// Matrix of an operator between two fixed exterior degrees, over the
/// lexicographic monomial bases.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub source_degree: usize,
    pub target_degree: usize,
    pub matrix: Matrix,
}

struct DegreeData {
    monomials: Vec<MultiIndex>,
    /// Basis of the primitive subspace, from the row-reduced kernel of the
    /// lowering operator; empty above the middle degree.
    primitive: Vec<Form>,
    /// Decomposition of each monomial, solved once at construction;
    /// decomposing an arbitrary form is then a sparse linear combination.
    monomial_decompositions: Vec<LefschetzDecomposition>,
}

pub struct LefschetzOps {
    model: Arc<LieModel>,
    /// Inverse Gram matrix entries `pi[i][j]` of omega, 0-based.
    poisson: Vec<Vec<Scalar>>,
    degrees: Vec<DegreeData>,
}

impl LefschetzOps {
    /// Builds the operator package. The model must pass validation;
    /// degenerate omega makes the Poisson bivector (and the whole sl2
    /// action) undefined.
    pub fn new(model: Arc<LieModel>) -> Self {
        let report = model.validate();
        assert!(
            report.passed(),
            "operator package needs a valid model: {}",
            report.failure_summary()
        );
        let dim = model.dim();
        let poisson = invert_gram(&model);

        // First pass: primitive bases per degree, bottom up.
        let mut monomials: Vec<Vec<MultiIndex>> = Vec::with_capacity(dim + 1);
        for k in 0..=dim {
            monomials.push(MultiIndex::all(dim, k));
        }
        let mut primitive: Vec<Vec<Form>> = Vec::with_capacity(dim + 1);
        for k in 0..=dim {
            if k > model.half_dim() {
                primitive.push(Vec::new());
                continue;
            }
            if k < 2 {
                primitive.push(
                    monomials[k]
                        .iter()
                        .map(|ix| Form::monomial(ix.clone(), scalar::one()))
                        .collect(),
                );
                continue;
            }
            let lower = contract_matrix(&poisson, &monomials[k], &monomials[k - 2]);
            let kernel = lower.kernel_basis();
            primitive.push(
                kernel
                    .iter()
                    .map(|v| form_from_coords(&monomials[k], v))
                    .collect(),
            );
        }

        // Second pass: one exact solve per degree. The columns
        // omega^j ∧ beta over all admissible j form a basis of the degree,
        // so the system is square and invertible; solving it once per
        // monomial caches every decomposition this instance will need.
        let mut degrees = Vec::with_capacity(dim + 1);
        for k in 0..=dim {
            let mut blocks = Vec::new();
            let mut columns = Vec::new();
            for j in 0..=(k / 2) {
                let s = k - 2 * j;
                for (idx, beta) in primitive[s].iter().enumerate() {
                    let col = model.omega().wedge_pow(j).wedge(beta);
                    if col.is_zero() {
                        continue;
                    }
                    blocks.push((j, idx));
                    columns.push(coords(&monomials[k], &col));
                }
            }
            let matrix = Matrix::from_columns(monomials[k].len(), &columns);
            assert_eq!(
                matrix.cols(),
                monomials[k].len(),
                "Lefschetz pyramid does not span degree {k}"
            );
            let solver = Solver::new(&matrix);
            assert_eq!(
                solver.rank(),
                monomials[k].len(),
                "Lefschetz pyramid is degenerate at degree {k}"
            );
            let monomial_decompositions = (0..monomials[k].len())
                .map(|pos| {
                    let mut rhs = vec![Scalar::zero(); monomials[k].len()];
                    rhs[pos] = scalar::one();
                    let x = solver
                        .solve(&rhs)
                        .expect("pyramid solve failed on a monomial");
                    let mut components: BTreeMap<usize, Form> = BTreeMap::new();
                    for (col, (j, idx)) in blocks.iter().enumerate() {
                        if x[col].is_zero() {
                            continue;
                        }
                        let beta = primitive[k - 2 * j][*idx].scaled(&x[col]);
                        merge_component(&mut components, *j, &beta);
                    }
                    LefschetzDecomposition {
                        degree: k,
                        components,
                    }
                })
                .collect();
            degrees.push(DegreeData {
                monomials: monomials[k].clone(),
                primitive: primitive[k].clone(),
                monomial_decompositions,
            });
        }

        LefschetzOps {
            model,
            poisson,
            degrees,
        }
    }

    pub fn model(&self) -> &Arc<LieModel> {
        &self.model
    }

    pub fn half_dim(&self) -> usize {
        self.model.half_dim()
    }

    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    pub fn monomials(&self, k: usize) -> &[MultiIndex] {
        &self.degrees[k].monomials
    }

    pub fn d(&self, a: &Form) -> Form {
        self.model.d(a)
    }

    /// Raising operator: `omega ∧ a`.
    pub fn omega_wedge(&self, a: &Form) -> Form {
        self.model.omega().wedge(a)
    }

    pub fn omega_pow_wedge(&self, j: usize, a: &Form) -> Form {
        self.model.omega().wedge_pow(j).wedge(a)
    }

    /// Lowering operator: interior product with the Poisson bivector dual
    /// to omega, normalized so the sl2 commutation relations hold (see the
    /// sl2 suite).
    pub fn poisson_contract(&self, a: &Form) -> Form {
        let dim = self.dim();
        let mut out = Form::zero();
        for i in 0..dim {
            for j in (i + 1)..dim {
                let c = &self.poisson[i][j];
                if c.is_zero() {
                    continue;
                }
                let contracted = a.contract((j + 1) as u8).contract((i + 1) as u8);
                if !contracted.is_zero() {
                    out = &out + &contracted.scaled(c);
                }
            }
        }
        out
    }

    pub fn primitive_basis(&self, s: usize) -> &[Form] {
        static EMPTY: [Form; 0] = [];
        if s > self.dim() {
            return &EMPTY;
        }
        &self.degrees[s].primitive
    }

    /// The unique primitive components of a homogeneous form, assembled
    /// from the cached monomial decompositions.
    pub fn decompose(&self, a: &Form) -> LefschetzDecomposition {
        let Some(k) = a.degree() else {
            assert!(a.is_zero(), "decompose requires a homogeneous form");
            return LefschetzDecomposition {
                degree: 0,
                components: BTreeMap::new(),
            };
        };
        let data = &self.degrees[k];
        let mut components: BTreeMap<usize, Form> = BTreeMap::new();
        for (ix, c) in a.terms() {
            let pos = data
                .monomials
                .binary_search(ix)
                .expect("monomial outside the degree basis");
            for (j, beta) in data.monomial_decompositions[pos].components() {
                merge_component(&mut components, j, &beta.scaled(c));
            }
        }
        LefschetzDecomposition {
            degree: k,
            components,
        }
    }

    fn reassemble(&self, parts: impl Iterator<Item = (usize, Form)>) -> Form {
        let mut out = Form::zero();
        for (j, beta) in parts {
            out = &out + &self.omega_pow_wedge(j, &beta);
        }
        out
    }

    /// Reflection about the middle column of the Lefschetz pyramid:
    /// `omega^j ∧ beta_s -> omega^{n-j-s} ∧ beta_s`. An involution mapping
    /// degree k onto degree 2n - k.
    pub fn reflect(&self, a: &Form) -> Form {
        let n = self.half_dim();
        let dec = self.decompose(a);
        let k = dec.degree();
        self.reassemble(dec.components().map(|(j, beta)| {
            let s = k - 2 * j;
            debug_assert!(n >= j + s, "pyramid component out of range");
            (n - j - s, beta.clone())
        }))
    }

    /// Removes `omega^p` from every term of the decomposition, dropping
    /// components with fewer than `p` omega factors.
    pub fn strip_omega(&self, p: usize, a: &Form) -> Form {
        if a.is_zero() || p == 0 {
            return a.clone();
        }
        let dec = self.decompose(a);
        self.reassemble(
            dec.components()
                .filter(|(j, _)| *j >= p)
                .map(|(j, beta)| (j - p, beta.clone())),
        )
    }

    /// Projection keeping the terms with at most `p` omega factors; equals
    /// `1 - L^{p+1} ∘ L^{-(p+1)}` where `L` raises and `L^{-}` strips.
    pub fn project_filtered(&self, p: usize, a: &Form) -> Form {
        if a.is_zero() {
            return Form::zero();
        }
        let dec = self.decompose(a);
        self.reassemble(
            dec.components()
                .filter(|(j, _)| *j <= p)
                .map(|(j, beta)| (j, beta.clone())),
        )
    }

    /// Reflected projection `reflect ∘ project_filtered ∘ reflect`,
    /// computed as `1 - L^{-(p+1)} ∘ L^{p+1}`.
    pub fn project_filtered_dual(&self, p: usize, a: &Form) -> Form {
        let raised = self.omega_pow_wedge(p + 1, a);
        let round_trip = self.strip_omega(p + 1, &raised);
        a - &round_trip
    }

    /// Splits the differential along the decomposition: for primitive
    /// `beta`, `d beta = d_plus(beta) + omega ∧ d_minus(beta)` with both
    /// parts primitive, extended by `d_pm(omega^j beta) = omega^j d_pm(beta)`.
    /// Returns `(d_plus(a), d_minus(a))`.
    pub fn d_split(&self, a: &Form) -> (Form, Form) {
        if a.is_zero() {
            return (Form::zero(), Form::zero());
        }
        let dec = self.decompose(a);
        let mut plus = Form::zero();
        let mut minus = Form::zero();
        for (j, beta) in dec.components() {
            let db = self.d(beta);
            if db.is_zero() {
                continue;
            }
            let parts = self.decompose(&db);
            assert!(
                parts.max_power().unwrap_or(0) <= 1,
                "d of a primitive form acquired an omega^2 component: d({beta}) = {db}"
            );
            plus = &plus + &self.omega_pow_wedge(j, &parts.component(0));
            minus = &minus + &self.omega_pow_wedge(j, &parts.component(1));
        }
        (plus, minus)
    }

    /// The four equivalent filtration tests, in order:
    /// (i) the decomposition stops at omega^p,
    /// (ii) the (p+1)-fold lowering operator kills the form,
    /// (iii) `L^{n+p+1-k}` kills the form,
    /// (iv) `L^{p+1}` kills the reflection.
    pub fn filtered_witness(&self, p: usize, a: &Form) -> [bool; 4] {
        if a.is_zero() {
            return [true; 4];
        }
        let k = a.degree().expect("filtration test requires a homogeneous form");
        let n = self.half_dim();

        let cond_i = self.project_filtered(p, a) == *a;

        let mut lowered = a.clone();
        for _ in 0..=p {
            lowered = self.poisson_contract(&lowered);
            if lowered.is_zero() {
                break;
            }
        }
        let cond_ii = lowered.is_zero();

        let cond_iii = if n + p + 1 >= k {
            self.omega_pow_wedge(n + p + 1 - k, a).is_zero()
        } else {
            // raising power would be negative; the form is too deep in the
            // pyramid to be filtered
            false
        };

        let cond_iv = self.omega_pow_wedge(p + 1, &self.reflect(a)).is_zero();

        [cond_i, cond_ii, cond_iii, cond_iv]
    }

    /// Whether `a` is `p`-filtered. The four tests of `filtered_witness`
    /// must agree; disagreement is an implementation bug and aborts.
    pub fn is_filtered(&self, p: usize, a: &Form) -> bool {
        let w = self.filtered_witness(p, a);
        assert!(
            w.iter().all(|&b| b == w[0]),
            "filtration tests disagree ({w:?}) on {a}"
        );
        w[0]
    }

    /// Deterministic basis of the space of `p`-filtered `k`-forms:
    /// `omega^j ∧ beta` over `j = 0..=p` and the primitive bases, in block
    /// order.
    pub fn filtered_basis(&self, p: usize, k: usize) -> Vec<Form> {
        if k > self.dim() {
            return Vec::new();
        }
        let mut out = Vec::new();
        for j in 0..=p.min(k / 2) {
            let s = k - 2 * j;
            for beta in self.primitive_basis(s) {
                let form = self.omega_pow_wedge(j, beta);
                if !form.is_zero() {
                    out.push(form);
                }
            }
        }
        out
    }

    /// Matrix of an arbitrary degree-homogeneous operator over the monomial
    /// bases.
    pub fn operator_matrix(
        &self,
        source_degree: usize,
        target_degree: usize,
        op: impl Fn(&Form) -> Form,
    ) -> OperatorMatrix {
        let source = &self.degrees[source_degree].monomials;
        let target = &self.degrees[target_degree].monomials;
        let columns: Vec<Vec<Scalar>> = source
            .iter()
            .map(|ix| {
                let image = op(&Form::monomial(ix.clone(), scalar::one()));
                if !image.is_zero() {
                    let deg = image.degree().expect("operator image not homogeneous");
                    assert_eq!(deg, target_degree, "operator lands in the wrong degree");
                }
                coords(target, &image)
            })
            .collect();
        OperatorMatrix {
            source_degree,
            target_degree,
            matrix: Matrix::from_columns(target.len(), &columns),
        }
    }

    pub fn coords_in_degree(&self, k: usize, a: &Form) -> Vec<Scalar> {
        coords(&self.degrees[k].monomials, a)
    }
}

fn invert_gram(model: &LieModel) -> Vec<Vec<Scalar>> {
    let dim = model.dim();
    let mut gram = Matrix::zeros(dim, dim);
    for (ix, c) in model.omega().terms() {
        let labels = ix.labels();
        assert_eq!(labels.len(), 2, "omega must be a 2-form");
        let (i, j) = (labels[0] as usize - 1, labels[1] as usize - 1);
        gram[(i, j)] = c.clone();
        gram[(j, i)] = -c.clone();
    }
    let solver = Solver::new(&gram);
    assert_eq!(solver.rank(), dim, "omega is degenerate");
    let mut inverse = vec![vec![Scalar::zero(); dim]; dim];
    for col in 0..dim {
        let mut e = vec![Scalar::zero(); dim];
        e[col] = scalar::one();
        let x = solver.solve(&e).expect("gram matrix is invertible");
        for (row, v) in x.into_iter().enumerate() {
            inverse[row][col] = v;
        }
    }
    inverse
}

fn contract_matrix(
    poisson: &[Vec<Scalar>],
    source: &[MultiIndex],
    target: &[MultiIndex],
) -> Matrix {
    let dim = poisson.len();
    let columns: Vec<Vec<Scalar>> = source
        .iter()
        .map(|ix| {
            let form = Form::monomial(ix.clone(), scalar::one());
            let mut image = Form::zero();
            for i in 0..dim {
                for j in (i + 1)..dim {
                    if poisson[i][j].is_zero() {
                        continue;
                    }
                    let c = form.contract((j + 1) as u8).contract((i + 1) as u8);
                    if !c.is_zero() {
                        image = &image + &c.scaled(&poisson[i][j]);
                    }
                }
            }
            coords(target, &image)
        })
        .collect();
    Matrix::from_columns(target.len(), &columns)
}

fn merge_component(components: &mut BTreeMap<usize, Form>, j: usize, beta: &Form) {
    if beta.is_zero() {
        return;
    }
    match components.entry(j) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(beta.clone());
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let merged = e.get() + beta;
            if merged.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = merged;
            }
        }
    }
}

fn coords(basis: &[MultiIndex], a: &Form) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); basis.len()];
    for (ix, c) in a.terms() {
        let pos = basis
            .binary_search(ix)
            .expect("monomial outside the degree basis");
        v[pos] = c.clone();
    }
    v
}

fn form_from_coords(basis: &[MultiIndex], v: &[Scalar]) -> Form {
    let mut out = Form::zero();
    for (ix, c) in basis.iter().zip(v) {
        if !c.is_zero() {
            out.add_term(ix.clone(), c.clone());
        }
    }
    out
}

// ---------------------------------------------------------------------------
// sl2 identity suite
// ---------------------------------------------------------------------------

/// Verifies the commutation relations, reflection identities, projection
/// identities, and the split of the differential, exhaustively on monomial
/// bases. `p` selects the filtration level for the p-dependent identities.
pub fn sl2_suite(ops: &LefschetzOps, p: usize) -> IdentityReport {
    let mut report = IdentityReport::new("sl2", ops.model().name(), p);
    let n = ops.half_dim() as i64;
    let dim = ops.dim();

    let witness = |input: &Form, lhs: &Form, rhs: &Form| Counterexample {
        inputs: vec![input.to_string()],
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    };

    let mut commutators = IdentityResult::exhaustive("sl2 commutation relations");
    let mut reflection = IdentityResult::exhaustive("reflection is an involution of complementary degrees");
    let mut strip_conjugate = IdentityResult::exhaustive("omega stripping is the reflected raising");
    let mut projections = IdentityResult::exhaustive("filtration projections are complementary");
    let mut d_splitting = IdentityResult::exhaustive("d = d_plus + omega ∧ d_minus, squares vanish");
    let mut commutator_cases = IdentityResult::exhaustive("[d, strip^{p+1}] switches projection sides");

    for k in 0..=dim {
        for ix in ops.monomials(k).iter() {
            let a = Form::monomial(ix.clone(), scalar::one());

            // [lower, raise] = (n - k) id, plus the weight brackets
            let lhs = &ops.poisson_contract(&ops.omega_wedge(&a))
                - &ops.omega_wedge(&ops.poisson_contract(&a));
            let rhs = a.scaled(&scalar::int(n - k as i64));
            commutators.record(lhs == rhs, || witness(&a, &lhs, &rhs));
            // [H, L] = -2L and [H, Λ] = 2Λ reduce to weight bookkeeping:
            // raising lowers the weight by 2, lowering raises it by 2.
            let raised = ops.omega_wedge(&a);
            let hl = raised.scaled(&scalar::int(n - (k as i64 + 2))); // H(L a)
            let lh = raised.scaled(&scalar::int(n - k as i64)); // L(H a)
            let exp = raised.scaled(&scalar::int(-2));
            commutators.record(&hl - &lh == exp, || witness(&a, &(&hl - &lh), &exp));
            let lowered = ops.poisson_contract(&a);
            let hl2 = lowered.scaled(&scalar::int(n - (k as i64 - 2)));
            let lh2 = lowered.scaled(&scalar::int(n - k as i64));
            let exp2 = lowered.scaled(&scalar::int(2));
            commutators.record(&hl2 - &lh2 == exp2, || witness(&a, &(&hl2 - &lh2), &exp2));

            // reflect ∘ reflect = id and reflect maps onto degree 2n - k
            let r = ops.reflect(&a);
            let rr = ops.reflect(&r);
            reflection.record(rr == a, || witness(&a, &rr, &a));
            let degree_ok = r.is_zero() || r.degree() == Some(2 * n as usize - k);
            reflection.record(degree_ok, || witness(&a, &r, &a));

            // strip_omega(q) = reflect ∘ raise^q ∘ reflect
            for q in 1..=(n as usize + 1) {
                let lhs = ops.strip_omega(q, &a);
                let rhs = ops.reflect(&ops.omega_pow_wedge(q, &ops.reflect(&a)));
                strip_conjugate.record(lhs == rhs, || witness(&a, &lhs, &rhs));
            }

            // project_filtered(p) + raise^{p+1} strip^{p+1} = id, and dually
            let proj = ops.project_filtered(p, &a);
            let complement = ops.omega_pow_wedge(p + 1, &ops.strip_omega(p + 1, &a));
            let sum = &proj + &complement;
            projections.record(sum == a, || witness(&a, &sum, &a));
            let dual = ops.project_filtered_dual(p, &a);
            let dual_complement = ops.strip_omega(p + 1, &ops.omega_pow_wedge(p + 1, &a));
            let dual_sum = &dual + &dual_complement;
            projections.record(dual_sum == a, || witness(&a, &dual_sum, &a));
            // and the reflected characterization of the dual projection
            let reflected = ops.reflect(&ops.project_filtered(p, &ops.reflect(&a)));
            projections.record(dual == reflected, || witness(&a, &dual, &reflected));

            // d = d_plus + omega ∧ d_minus with both squares zero
            let (dp, dm) = ops.d_split(&a);
            let expected = &dp + &ops.omega_wedge(&dm);
            let da = ops.d(&a);
            d_splitting.record(expected == da, || witness(&a, &expected, &da));
            let (dpp, _) = ops.d_split(&dp);
            d_splitting.record(dpp.is_zero(), || witness(&a, &dpp, &Form::zero()));
            let (_, dmm) = ops.d_split(&dm);
            d_splitting.record(dmm.is_zero(), || witness(&a, &dmm, &Form::zero()));
            // omega ∧ (d_plus d_minus + d_minus d_plus) = 0
            let (_, dm_of_dp) = ops.d_split(&dp);
            let (dp_of_dm, _) = ops.d_split(&dm);
            let anti = ops.omega_wedge(&(&dm_of_dp + &dp_of_dm));
            d_splitting.record(anti.is_zero(), || witness(&a, &anti, &Form::zero()));

            // [d, strip^{p+1}] acts by -strip^{p+1} d proj below the middle
            // band and by proj_dual d strip^{p+1} above it
            let commutator = &ops.d(&ops.strip_omega(p + 1, &a)) - &ops.strip_omega(p + 1, &ops.d(&a));
            let expected = if k <= n as usize + p {
                -&ops.strip_omega(p + 1, &ops.d(&ops.project_filtered(p, &a)))
            } else {
                ops.project_filtered_dual(p, &ops.d(&ops.strip_omega(p + 1, &a)))
            };
            commutator_cases.record(commutator == expected, || witness(&a, &commutator, &expected));
        }
    }

    // dim Omega^k = sum_j dim P^{k-2j}: the pyramid reassembles each degree
    let mut pyramid = IdentityResult::exhaustive("pyramid dimensions reassemble each degree");
    for k in 0..=dim {
        let total: usize = (0..=(k / 2))
            .map(|j| {
                let s = k - 2 * j;
                ops.primitive_basis(s)
                    .iter()
                    .filter(|beta| !ops.omega_pow_wedge(j, beta).is_zero())
                    .count()
            })
            .sum();
        let expected = ops.monomials(k).len();
        pyramid.record(total == expected, || Counterexample {
            inputs: vec![format!("degree {k}")],
            lhs: total.to_string(),
            rhs: expected.to_string(),
        });
    }

    report.push(commutators);
    report.push(reflection);
    report.push(strip_conjugate);
    report.push(projections);
    report.push(d_splitting);
    report.push(commutator_cases);
    report.push(pyramid);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{builtin_models, kt4};
    use crate::scalar::{int, ratio};

    fn mono(labels: &[u8]) -> Form {
        Form::monomial(MultiIndex::new(labels.to_vec()).unwrap(), int(1))
    }

    fn ops_kt4() -> LefschetzOps {
        LefschetzOps::new(Arc::new(kt4()))
    }

    #[test]
    fn raising_examples() {
        let ops = ops_kt4();
        let omega = &mono(&[1, 2]) + &mono(&[3, 4]);
        assert_eq!(ops.omega_wedge(&Form::one()), omega);
        assert_eq!(ops.omega_wedge(&Form::generator(3)), mono(&[1, 2, 3]));
        assert_eq!(ops.omega_wedge(&omega), mono(&[1, 2, 3, 4]).scaled(&int(2)));
    }

    #[test]
    fn lowering_examples() {
        let ops = ops_kt4();
        assert_eq!(ops.poisson_contract(&mono(&[1, 2])), Form::one());
        assert!(ops.poisson_contract(&mono(&[1, 4])).is_zero());
        let omega = &mono(&[1, 2]) + &mono(&[3, 4]);
        assert_eq!(ops.poisson_contract(&omega), Form::one().scaled(&int(2)));
    }

    #[test]
    fn primitive_bases_on_kt4() {
        let ops = ops_kt4();
        assert_eq!(ops.primitive_basis(1).len(), 4);
        assert_eq!(ops.primitive_basis(2).len(), 5);
        assert!(ops.primitive_basis(3).is_empty());
        for beta in ops.primitive_basis(2) {
            assert!(ops.poisson_contract(beta).is_zero());
        }
    }

    #[test]
    fn decomposition_of_e12() {
        let ops = ops_kt4();
        let dec = ops.decompose(&mono(&[1, 2]));
        let beta2 = (&mono(&[1, 2]) - &mono(&[3, 4])).scaled(&ratio(1, 2));
        assert_eq!(dec.component(0), beta2);
        assert_eq!(dec.component(1), Form::one().scaled(&ratio(1, 2)));
        // primitivity and exact reassembly
        assert!(ops.poisson_contract(&dec.component(0)).is_zero());
        let reassembled = &dec.component(0) + &ops.omega_wedge(&dec.component(1));
        assert_eq!(reassembled, mono(&[1, 2]));
    }

    #[test]
    fn decomposition_of_primitive_and_raised_forms() {
        let ops = ops_kt4();
        let dec = ops.decompose(&mono(&[1, 4]));
        assert_eq!(dec.component(0), mono(&[1, 4]));
        assert!(dec.component(1).is_zero());

        let dec = ops.decompose(&mono(&[1, 2, 3]));
        assert!(dec.component(0).is_zero());
        assert_eq!(dec.component(1), Form::generator(3));
    }

    #[test]
    fn reflection_examples() {
        let ops = ops_kt4();
        assert_eq!(
            ops.reflect(&Form::one()),
            mono(&[1, 2, 3, 4]).scaled(&int(2))
        );
        assert_eq!(ops.reflect(&mono(&[2, 3])), mono(&[2, 3]));
        assert_eq!(ops.reflect(&Form::generator(4)), mono(&[1, 2, 4]));
    }

    #[test]
    fn strip_omega_examples() {
        let ops = ops_kt4();
        assert_eq!(ops.strip_omega(1, &mono(&[1, 2, 3])), Form::generator(3));
        assert!(ops.strip_omega(1, &mono(&[1, 4])).is_zero());
        let omega = &mono(&[1, 2]) + &mono(&[3, 4]);
        let omega_sq = omega.wedge(&omega);
        assert_eq!(ops.strip_omega(1, &omega_sq), omega);
    }

    #[test]
    fn projection_examples() {
        let ops = ops_kt4();
        let omega = &mono(&[1, 2]) + &mono(&[3, 4]);
        assert!(ops.project_filtered(0, &omega).is_zero());
        let half_diff = (&mono(&[1, 2]) - &mono(&[3, 4])).scaled(&ratio(1, 2));
        assert_eq!(ops.project_filtered(0, &mono(&[1, 2])), half_diff);
        assert_eq!(ops.project_filtered(1, &mono(&[1, 2])), mono(&[1, 2]));
    }

    #[test]
    fn dual_projection_examples() {
        let ops = ops_kt4();
        let omega = &mono(&[1, 2]) + &mono(&[3, 4]);
        assert!(ops.project_filtered_dual(0, &omega).is_zero());
        assert_eq!(
            ops.project_filtered_dual(0, &mono(&[1, 2, 3, 4])),
            mono(&[1, 2, 3, 4])
        );
        assert!(ops.project_filtered_dual(0, &Form::one()).is_zero());
    }

    #[test]
    fn d_split_examples() {
        let ops = ops_kt4();
        let (plus, minus) = ops.d_split(&mono(&[1, 4]));
        assert!(plus.is_zero());
        assert_eq!(minus, -&Form::generator(3));

        let (plus, minus) = ops.d_split(&Form::generator(4));
        assert_eq!(plus, mono(&[2, 3]));
        assert!(minus.is_zero());
    }

    #[test]
    fn filtration_tests_agree() {
        let ops = ops_kt4();
        assert!(ops.is_filtered(0, &mono(&[1, 4])));
        let omega = &mono(&[1, 2]) + &mono(&[3, 4]);
        assert!(!ops.is_filtered(0, &omega));
        assert!(ops.is_filtered(1, &omega));
        assert!(!ops.is_filtered(0, &mono(&[1, 2, 3, 4])));
        // each witness agrees component-wise on a mixed bag of inputs
        for form in [&mono(&[1, 4]), &omega, &mono(&[1, 2, 3, 4]), &Form::one()] {
            for p in 0..=2 {
                let w = ops.filtered_witness(p, form);
                assert!(w.iter().all(|&b| b == w[0]), "{form}: {w:?}");
            }
        }
    }

    #[test]
    fn filtered_bases_have_expected_dimensions() {
        let ops = ops_kt4();
        // F^0 Omega^k = P^k on kt4: dims 1, 4, 5, then zero
        assert_eq!(ops.filtered_basis(0, 0).len(), 1);
        assert_eq!(ops.filtered_basis(0, 1).len(), 4);
        assert_eq!(ops.filtered_basis(0, 2).len(), 5);
        assert_eq!(ops.filtered_basis(0, 3).len(), 0);
        // F^1 Omega^3 = Omega^3
        assert_eq!(ops.filtered_basis(1, 3).len(), 4);
        for f in ops.filtered_basis(1, 3) {
            assert!(ops.is_filtered(1, &f));
        }
    }

    #[test]
    fn operator_package_is_share_safe() {
        // build once, read from many threads concurrently
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<LefschetzOps>();

        let ops = Arc::new(LefschetzOps::new(Arc::new(kt4())));
        let handles: Vec<_> = (0..4)
            .map(|worker| {
                let ops = Arc::clone(&ops);
                std::thread::spawn(move || {
                    for k in 0..=ops.dim() {
                        for ix in ops.monomials(k).iter().skip(worker % 2) {
                            let a = Form::monomial(ix.clone(), scalar::one());
                            let dec = ops.decompose(&a);
                            let reassembled = dec
                                .components()
                                .fold(Form::zero(), |acc, (j, beta)| {
                                    &acc + &ops.omega_pow_wedge(j, beta)
                                });
                            assert_eq!(reassembled, a);
                        }
                    }
                })
            })
            .collect();
        for handle in handles {
            handle.join().unwrap();
        }
    }

    #[test]
    fn sl2_suite_passes_on_builtins() {
        for model in builtin_models() {
            let ops = LefschetzOps::new(Arc::new(model));
            for p in 0..=ops.half_dim() {
                let report = sl2_suite(&ops, p);
                assert!(
                    report.passed(),
                    "sl2 suite failed on {} at p={p}: {:?}",
                    ops.model().name(),
                    report
                        .identities
                        .iter()
                        .filter(|i| !i.passed())
                        .map(|i| (&i.name, &i.failures))
                        .collect::<Vec<_>>()
                );
            }
        }
    }
}
