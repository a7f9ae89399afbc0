//! The filtered cochain complex with its A-infinity products.
//!
//! For a filtration level `p` the complex runs through two copies of the
//! `p`-filtered forms: a *plain* side in complex degrees `0 ..= n+p` and a
//! *barred* side in degrees `n+p+1 ..= 2n+2p+1`, glued by a second-order
//! differential in the middle. The barred copy is kept structurally (a
//! side flag), never inferred from degree arithmetic, because a filtered
//! `k`-form is ambiguous between degrees `k` and `2n+2p+1-k`.
//!
//! Products: `m2` is graded commutative with unit the constant form 1,
//! `m3` is the single higher product, and everything above vanishes. The
//! Stasheff suite verifies the A-infinity relations for all arities that
//! are not identically zero.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num::traits::Zero;

use crate::error::Error;
use crate::exterior::Form;
use crate::lefschetz::LefschetzOps;
use crate::linalg::{Matrix, Solver};
use crate::report::{Counterexample, IdentityReport, IdentityResult};
use crate::sample::{SuiteConfig, TupleStream};
use crate::scalar::{self, Scalar};

/// Which copy of the filtered forms an element lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Plain,
    Barred,
}

/// Deliberate defects for mutation-sensitivity testing. Each one must be
/// caught by at least one verification suite; a suite that stays green
/// under injection is vacuous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Drop the minus sign on the middle (second-order) differential.
    FlipMiddleDifferentialSign,
    /// Skip the filtered projection in the low-degree product case.
    DropProjectionInProduct,
    /// Flip the sign of the theta slot of the retraction homotopy.
    FlipHomotopyThetaSign,
}

/// Element of the filtered complex: a `p`-filtered form together with the
/// side flag and its complex degree.
#[derive(Debug, Clone)]
pub struct FilteredElement {
    p: usize,
    side: Side,
    form: Form,
    complex_degree: usize,
}

impl FilteredElement {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn complex_degree(&self) -> usize {
        self.complex_degree
    }

    pub fn is_zero(&self) -> bool {
        self.form.is_zero()
    }

    pub fn zero(p: usize, complex_degree: usize) -> Self {
        FilteredElement {
            p,
            side: Side::Plain,
            form: Form::zero(),
            complex_degree,
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        FilteredElement {
            p: self.p,
            side: self.side,
            form: self.form.scaled(c),
            complex_degree: self.complex_degree,
        }
    }

    pub fn neg(&self) -> Self {
        self.scaled(&scalar::int(-1))
    }

    /// Adds two elements; zeros are absorbing, otherwise side and degree
    /// must agree.
    pub fn add(&self, other: &FilteredElement) -> FilteredElement {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.p, other.p, "elements from different filtration levels");
        assert_eq!(
            (self.side, self.complex_degree),
            (other.side, other.complex_degree),
            "adding elements of different degrees"
        );
        FilteredElement {
            p: self.p,
            side: self.side,
            form: &self.form + &other.form,
            complex_degree: self.complex_degree,
        }
    }
}

impl PartialEq for FilteredElement {
    fn eq(&self, other: &Self) -> bool {
        if self.is_zero() && other.is_zero() {
            return true;
        }
        self.p == other.p
            && self.side == other.side
            && self.complex_degree == other.complex_degree
            && self.form == other.form
    }
}

impl Eq for FilteredElement {}

impl fmt::Display for FilteredElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        match self.side {
            Side::Plain => write!(f, "{}", self.form),
            Side::Barred => write!(f, "bar({})@{}", self.form, self.complex_degree),
        }
    }
}

/// The filtered complex at level `p` over a fixed model: ordered bases per
/// complex degree, differential matrices, coordinate solvers, and the
/// A-infinity products.
pub struct FpComplex {
    ops: Arc<LefschetzOps>,
    p: usize,
    fault: Fault,
    /// per complex degree: the complex basis followed by a monomial
    /// completion of the ambient exterior degree (the completion carries
    /// weight only under fault injection)
    elements: Vec<Vec<FilteredElement>>,
    core_len: Vec<usize>,
    solvers: Vec<Option<DegreeSolver>>,
    differentials: Vec<Matrix>,
}

struct DegreeSolver {
    solver: Solver,
    form_degree: usize,
}

impl FpComplex {
    pub fn new(ops: Arc<LefschetzOps>, p: usize) -> Result<Self, Error> {
        Self::with_fault(ops, p, Fault::None)
    }

    pub fn with_fault(ops: Arc<LefschetzOps>, p: usize, fault: Fault) -> Result<Self, Error> {
        let n = ops.half_dim();
        if p > n {
            return Err(Error::FiltrationOutOfRange { p, n });
        }
        let top = 2 * n + 2 * p + 1;
        let mut elements = Vec::with_capacity(top + 1);
        let mut core_len = Vec::with_capacity(top + 1);
        let mut solvers = Vec::with_capacity(top + 1);
        for cd in 0..=top {
            let (side, k) = if cd <= n + p {
                (Side::Plain, cd)
            } else {
                (Side::Barred, top - cd)
            };
            let forms = ops.filtered_basis(p, k);
            let mut degree_elements: Vec<FilteredElement> = forms
                .iter()
                .map(|form| FilteredElement {
                    p,
                    side,
                    form: form.clone(),
                    complex_degree: cd,
                })
                .collect();
            core_len.push(degree_elements.len());
            let rows = ops.monomials(k).len();
            let mut columns: Vec<Vec<Scalar>> = forms
                .iter()
                .map(|f| ops.coords_in_degree(k, f))
                .collect();
            let mut rank = Matrix::from_columns(rows, &columns).rank();
            assert_eq!(rank, forms.len(), "filtered basis is dependent");
            // complete to a basis of the whole exterior degree so that any
            // homogeneous form has coordinates here
            for ix in ops.monomials(k).to_vec() {
                if rank == rows {
                    break;
                }
                let form = Form::monomial(ix, scalar::one());
                let mut candidate = columns.clone();
                candidate.push(ops.coords_in_degree(k, &form));
                let new_rank = Matrix::from_columns(rows, &candidate).rank();
                if new_rank > rank {
                    rank = new_rank;
                    columns = candidate;
                    degree_elements.push(FilteredElement {
                        p,
                        side,
                        form,
                        complex_degree: cd,
                    });
                }
            }
            solvers.push(if degree_elements.is_empty() {
                None
            } else {
                let solver = Solver::new(&Matrix::from_columns(rows, &columns));
                assert_eq!(solver.rank(), rows, "degree completion failed");
                Some(DegreeSolver {
                    solver,
                    form_degree: k,
                })
            });
            elements.push(degree_elements);
        }

        let mut complex = FpComplex {
            ops,
            p,
            fault,
            elements,
            core_len,
            solvers,
            differentials: Vec::new(),
        };
        for cd in 0..=top {
            let source = complex.basis(cd).to_vec();
            let target_dim = if cd < top {
                complex.basis(cd + 1).len()
            } else {
                0
            };
            let columns: Vec<Vec<Scalar>> = source
                .iter()
                .map(|x| {
                    let image = complex.m1(x);
                    complex
                        .coords_of(&image)
                        .expect("differential image left the complex")
                })
                .collect();
            complex
                .differentials
                .push(Matrix::from_columns(target_dim, &columns));
        }
        // complex axiom: consecutive differentials compose to zero
        for cd in 0..top {
            let square = complex.differentials[cd + 1].mul_mat(&complex.differentials[cd]);
            assert!(square.is_zero(), "m1 ∘ m1 != 0 entering degree {}", cd + 2);
        }
        Ok(complex)
    }

    pub fn ops(&self) -> &Arc<LefschetzOps> {
        &self.ops
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn fault(&self) -> Fault {
        self.fault
    }

    pub fn half_dim(&self) -> usize {
        self.ops.half_dim()
    }

    /// Complex degree of the middle (top of the plain side).
    pub fn middle(&self) -> usize {
        self.ops.half_dim() + self.p
    }

    pub fn top_degree(&self) -> usize {
        2 * self.ops.half_dim() + 2 * self.p + 1
    }

    /// The complex basis at one degree (completion elements excluded).
    pub fn basis(&self, cd: usize) -> &[FilteredElement] {
        static EMPTY: [FilteredElement; 0] = [];
        match self.elements.get(cd) {
            Some(v) => &v[..self.core_len[cd]],
            None => &EMPTY,
        }
    }

    /// The complex basis together with the ambient completion.
    pub(crate) fn basis_extended(&self, cd: usize) -> &[FilteredElement] {
        static EMPTY: [FilteredElement; 0] = [];
        self.elements.get(cd).map(Vec::as_slice).unwrap_or(&EMPTY)
    }

    pub fn all_basis(&self) -> Vec<FilteredElement> {
        (0..self.elements.len())
            .flat_map(|cd| self.basis(cd).iter().cloned())
            .collect()
    }

    pub fn differential_matrix(&self, cd: usize) -> &Matrix {
        &self.differentials[cd]
    }

    /// The constant form 1 as the plain degree-0 element.
    pub fn unit(&self) -> FilteredElement {
        FilteredElement {
            p: self.p,
            side: Side::Plain,
            form: Form::one(),
            complex_degree: 0,
        }
    }

    pub fn plain(&self, form: Form) -> Result<FilteredElement, Error> {
        if form.is_zero() {
            return Ok(FilteredElement::zero(self.p, 0));
        }
        let k = form.degree().ok_or_else(|| Error::Input(
            "plain elements must be homogeneous".into(),
        ))?;
        if k > self.middle() || !self.ops.is_filtered(self.p, &form) {
            return Err(Error::NotFiltered {
                p: self.p,
                got: k,
                detail: form.to_string(),
            });
        }
        Ok(FilteredElement {
            p: self.p,
            side: Side::Plain,
            form,
            complex_degree: k,
        })
    }

    pub fn barred(&self, form: Form) -> Result<FilteredElement, Error> {
        if form.is_zero() {
            return Ok(FilteredElement::zero(self.p, self.top_degree()));
        }
        let k = form.degree().ok_or_else(|| Error::Input(
            "barred elements must be homogeneous".into(),
        ))?;
        if k > self.middle() || !self.ops.is_filtered(self.p, &form) {
            return Err(Error::NotFiltered {
                p: self.p,
                got: k,
                detail: form.to_string(),
            });
        }
        Ok(FilteredElement {
            p: self.p,
            side: Side::Barred,
            form,
            complex_degree: self.top_degree() - k,
        })
    }

    // Filteredness of product outputs is not asserted here: the
    // coordinate layer separates complex and completion components, so a
    // non-filtered output surfaces as an identity failure instead of a
    // crash (which is what the fault injections rely on).
    fn make(&self, side: Side, form: Form, complex_degree: usize) -> FilteredElement {
        FilteredElement {
            p: self.p,
            side,
            form,
            complex_degree,
        }
    }

    /// `d_plus = project ∘ d` on filtered forms of degree at most `n+p`.
    pub fn d_plus(&self, a: &Form) -> Result<Form, Error> {
        self.check_filtered(a)?;
        Ok(self.d_plus_unchecked(a))
    }

    fn d_plus_unchecked(&self, a: &Form) -> Form {
        self.ops.project_filtered(self.p, &self.ops.d(a))
    }

    /// `d_minus = reflect ∘ d ∘ reflect` on filtered forms.
    pub fn d_minus(&self, a: &Form) -> Result<Form, Error> {
        self.check_filtered(a)?;
        Ok(self.d_minus_unchecked(a))
    }

    fn d_minus_unchecked(&self, a: &Form) -> Form {
        if a.is_zero() || a.degree() == Some(0) {
            // reflect(a) is a multiple of omega^n, which is closed
            return Form::zero();
        }
        self.ops.reflect(&self.ops.d(&self.ops.reflect(a)))
    }

    fn check_filtered(&self, a: &Form) -> Result<(), Error> {
        if a.is_zero() {
            return Ok(());
        }
        let k = a
            .degree()
            .ok_or_else(|| Error::Input("operator input must be homogeneous".into()))?;
        if !self.ops.is_filtered(self.p, a) {
            return Err(Error::NotFiltered {
                p: self.p,
                got: k,
                detail: a.to_string(),
            });
        }
        Ok(())
    }

    /// Second-order middle map `a -> d_plus(d_minus-part) = ∂₊∂₋ a`.
    fn middle_map(&self, a: &Form) -> Form {
        let (_, minus) = self.ops.d_split(a);
        let (plus_of_minus, _) = self.ops.d_split(&minus);
        plus_of_minus
    }

    /// The differential of the complex: `d_plus` on the plain side, the
    /// negated second-order map across the middle, `-d_minus` on the
    /// barred side.
    pub fn m1(&self, x: &FilteredElement) -> FilteredElement {
        if x.is_zero() {
            return FilteredElement::zero(self.p, x.complex_degree + 1);
        }
        let cd = x.complex_degree;
        match x.side {
            Side::Plain if cd < self.middle() => {
                self.make(Side::Plain, self.d_plus_unchecked(&x.form), cd + 1)
            }
            Side::Plain => {
                let mut form = self.middle_map(&x.form);
                if self.fault != Fault::FlipMiddleDifferentialSign {
                    form = -&form;
                }
                self.make(Side::Barred, form, cd + 1)
            }
            Side::Barred => {
                let form = -&self.d_minus_unchecked(&x.form);
                self.make(Side::Barred, form, cd + 1)
            }
        }
    }

    /// Binary product. Case split on the sides and the total degree; the
    /// two mixed cases reflect one argument through the pyramid, and two
    /// barred arguments multiply to zero.
    pub fn m2(&self, x: &FilteredElement, y: &FilteredElement) -> FilteredElement {
        let cd = x.complex_degree + y.complex_degree;
        if x.is_zero() || y.is_zero() {
            return FilteredElement::zero(self.p, cd);
        }
        let p = self.p;
        let ops = &self.ops;
        match (x.side, y.side) {
            (Side::Plain, Side::Plain) => {
                let (k1, k2) = (x.complex_degree, y.complex_degree);
                if k1 + k2 <= self.middle() {
                    let mut form = x.form.wedge(&y.form);
                    if self.fault != Fault::DropProjectionInProduct {
                        form = ops.project_filtered(p, &form);
                    }
                    self.make(Side::Plain, form, cd)
                } else {
                    // the product measures how far strip∘d fails to be a
                    // derivation on the wedge, reflected back and projected
                    let wedge = x.form.wedge(&y.form);
                    let mut bracket = -&ops.d(&ops.strip_omega(p + 1, &wedge));
                    bracket = &bracket
                        + &ops.strip_omega(p + 1, &ops.d(&x.form)).wedge(&y.form);
                    let second = x.form.wedge(&ops.strip_omega(p + 1, &ops.d(&y.form)));
                    bracket = if k1 % 2 == 0 {
                        &bracket + &second
                    } else {
                        &bracket - &second
                    };
                    let form = ops.project_filtered(p, &ops.reflect(&bracket));
                    self.make(Side::Barred, form, cd)
                }
            }
            (Side::Plain, Side::Barred) => {
                let k1 = x.complex_degree;
                let mut form = ops.reflect(&y.form);
                form = x.form.wedge(&form);
                if form.is_zero() {
                    return FilteredElement::zero(p, cd);
                }
                form = ops.reflect(&form);
                if k1 % 2 == 1 {
                    form = -&form;
                }
                self.make(Side::Barred, form, cd)
            }
            (Side::Barred, Side::Plain) => {
                let form = ops.reflect(&x.form).wedge(&y.form);
                if form.is_zero() {
                    return FilteredElement::zero(p, cd);
                }
                self.make(Side::Barred, ops.reflect(&form), cd)
            }
            (Side::Barred, Side::Barred) => FilteredElement::zero(p, cd),
        }
    }

    /// Ternary product: nonzero only on three plain arguments whose total
    /// degree reaches past the middle band, landing on the barred side one
    /// degree below the total.
    pub fn m3(
        &self,
        x: &FilteredElement,
        y: &FilteredElement,
        z: &FilteredElement,
    ) -> FilteredElement {
        let cd = x.complex_degree + y.complex_degree + z.complex_degree;
        let out_degree = cd.saturating_sub(1);
        if x.is_zero() || y.is_zero() || z.is_zero() {
            return FilteredElement::zero(self.p, out_degree);
        }
        if x.side != Side::Plain || y.side != Side::Plain || z.side != Side::Plain {
            return FilteredElement::zero(self.p, out_degree);
        }
        let total = x.complex_degree + y.complex_degree + z.complex_degree;
        if total < self.half_dim() + self.p + 2 {
            return FilteredElement::zero(self.p, out_degree);
        }
        let ops = &self.ops;
        let p = self.p;
        let right = x.form.wedge(&ops.strip_omega(p + 1, &y.form.wedge(&z.form)));
        let left = ops.strip_omega(p + 1, &x.form.wedge(&y.form)).wedge(&z.form);
        let bracket = &right - &left;
        if bracket.is_zero() {
            return FilteredElement::zero(self.p, out_degree);
        }
        let form = ops.project_filtered(p, &ops.reflect(&bracket));
        self.make(Side::Barred, form, out_degree)
    }

    /// Coordinates over the full (complex + completion) basis at the
    /// element's degree. Always succeeds on homogeneous input; completion
    /// entries are nonzero only under fault injection.
    pub(crate) fn coords_extended(&self, x: &FilteredElement) -> Vec<Scalar> {
        let len = self.basis_extended(x.complex_degree).len();
        if x.is_zero() {
            return vec![scalar::zero(); len];
        }
        let solver = self.solvers[x.complex_degree]
            .as_ref()
            .expect("element at an empty degree");
        let vec = self.ops.coords_in_degree(solver.form_degree, &x.form);
        solver
            .solver
            .solve(&vec)
            .expect("completed degree basis spans every homogeneous form")
    }

    /// Coordinates of an element over the complex basis at its degree.
    /// `None` when the form lies outside the filtered span (possible only
    /// under fault injection).
    pub fn coords_of(&self, x: &FilteredElement) -> Option<Vec<Scalar>> {
        let full = self.coords_extended(x);
        let core = self.core_len.get(x.complex_degree).copied().unwrap_or(0);
        if full[core..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut v = full;
        v.truncate(core);
        Some(v)
    }

    pub fn element_from_coords(&self, cd: usize, coords: &[Scalar]) -> FilteredElement {
        let basis = self.basis(cd);
        assert_eq!(basis.len(), coords.len(), "coordinate length mismatch");
        let mut out = FilteredElement::zero(self.p, cd);
        for (e, c) in basis.iter().zip(coords) {
            if !c.is_zero() {
                out = out.add(&e.scaled(c));
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Stasheff identity suite
// ---------------------------------------------------------------------------

/// Sparse coordinate vector over the basis at one complex degree.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct CoordView {
    pub(crate) cd: usize,
    pub(crate) coords: Vec<(usize, Scalar)>,
}

impl CoordView {
    pub(crate) fn zero(cd: usize) -> Self {
        CoordView {
            cd,
            coords: Vec::new(),
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub(crate) fn add_scaled(&mut self, other: &CoordView, c: &Scalar) {
        if other.is_zero() || c.is_zero() {
            return;
        }
        if self.is_zero() {
            self.cd = other.cd;
        }
        assert_eq!(self.cd, other.cd, "accumulating mismatched degrees");
        for (idx, v) in &other.coords {
            let scaled = v.clone() * c;
            match self.coords.binary_search_by_key(idx, |(i, _)| *i) {
                Ok(pos) => {
                    self.coords[pos].1 += scaled;
                    if self.coords[pos].1.is_zero() {
                        self.coords.remove(pos);
                    }
                }
                Err(pos) => self.coords.insert(pos, (*idx, scaled)),
            }
        }
    }
}

/// Cached tables for fast multilinear evaluation of the products over
/// basis tuples. Values are coordinate vectors; filling an entry costs one
/// form-level evaluation plus one exact solve.
pub(crate) struct SuiteTables<'a> {
    fp: &'a FpComplex,
    /// global index -> (complex degree, position) over the extended bases
    index: Vec<(usize, usize)>,
    /// complex degree -> first global index of that degree
    offsets: Vec<usize>,
    /// global indices of the complex (non-completion) basis elements;
    /// identity tuples range over these
    core: Vec<usize>,
    m1: Vec<CoordView>,
    m2: HashMap<(u32, u32), CoordView>,
    m3: HashMap<(u32, u32, u32), CoordView>,
}

impl<'a> SuiteTables<'a> {
    pub(crate) fn new(fp: &'a FpComplex) -> Self {
        let mut index = Vec::new();
        let mut offsets = Vec::new();
        let mut core = Vec::new();
        for cd in 0..=fp.top_degree() {
            offsets.push(index.len());
            let core_here = fp.basis(cd).len();
            for pos in 0..fp.basis_extended(cd).len() {
                if pos < core_here {
                    core.push(index.len());
                }
                index.push((cd, pos));
            }
        }
        let m1 = index
            .iter()
            .map(|&(cd, pos)| {
                let image = fp.m1(&fp.basis_extended(cd)[pos]);
                let coords = fp
                    .coords_extended(&image)
                    .into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect();
                CoordView {
                    cd: cd + 1,
                    coords,
                }
            })
            .collect();
        SuiteTables {
            fp,
            index,
            offsets,
            core,
            m1,
            m2: HashMap::new(),
            m3: HashMap::new(),
        }
    }

    /// Number of complex basis elements (the identity tuple space).
    pub(crate) fn len(&self) -> usize {
        self.core.len()
    }

    /// Global index of the `i`-th complex basis element.
    pub(crate) fn core_global(&self, i: usize) -> usize {
        self.core[i]
    }

    /// Number of elements in the extended (complex + completion) index.
    pub(crate) fn global_len(&self) -> usize {
        self.index.len()
    }

    pub(crate) fn global_element(&self, global: usize) -> &FilteredElement {
        let (cd, pos) = self.index[global];
        &self.fp.basis_extended(cd)[pos]
    }

    /// The `i`-th complex basis element (tuple-space indexing).
    pub(crate) fn element(&self, i: usize) -> &FilteredElement {
        let (cd, pos) = self.index[self.core[i]];
        &self.fp.basis_extended(cd)[pos]
    }

    /// Complex degree of the `i`-th complex basis element.
    pub(crate) fn cd(&self, i: usize) -> usize {
        self.index[self.core[i]].0
    }

    pub(crate) fn offset(&self, cd: usize) -> usize {
        self.offsets[cd]
    }

    /// Singleton view of the `i`-th complex basis element, optionally
    /// scaled.
    pub(crate) fn view(&self, i: usize, c: Option<&Scalar>) -> CoordView {
        let mut e = self.singleton(i);
        if let Some(c) = c {
            if c != &scalar::one() {
                for entry in &mut e.coords {
                    entry.1 *= c;
                }
            }
        }
        e
    }

    pub(crate) fn m1_view(&self, x: &CoordView) -> CoordView {
        self.m1_elem(x)
    }

    pub(crate) fn m2_view(&mut self, x: &CoordView, y: &CoordView) -> CoordView {
        self.m2_elem(x, y)
    }

    pub(crate) fn m3_view(&mut self, x: &CoordView, y: &CoordView, z: &CoordView) -> CoordView {
        self.m3_elem(x, y, z)
    }

    fn is_plain(&self, i: usize) -> bool {
        self.cd(i) <= self.fp.middle()
    }

    fn singleton(&self, i: usize) -> CoordView {
        let (cd, pos) = self.index[self.core[i]];
        CoordView {
            cd,
            coords: vec![(pos, scalar::one())],
        }
    }

    fn to_coords(&self, x: &FilteredElement) -> CoordView {
        if x.is_zero() {
            return CoordView::zero(x.complex_degree());
        }
        CoordView {
            cd: x.complex_degree(),
            coords: self
                .fp
                .coords_extended(x)
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    fn m1_basis(&self, global: usize) -> &CoordView {
        &self.m1[global]
    }

    fn m2_basis(&mut self, gi: usize, gj: usize) -> &CoordView {
        let key = (gi as u32, gj as u32);
        if !self.m2.contains_key(&key) {
            let (ci, pi) = self.index[gi];
            let (cj, pj) = self.index[gj];
            let value = self
                .fp
                .m2(&self.fp.basis_extended(ci)[pi], &self.fp.basis_extended(cj)[pj]);
            let coords = self.to_coords(&value);
            self.m2.insert(key, coords);
        }
        &self.m2[&key]
    }

    fn m3_basis(&mut self, gi: usize, gj: usize, gk: usize) -> &CoordView {
        let key = (gi as u32, gj as u32, gk as u32);
        if !self.m3.contains_key(&key) {
            let (ci, pi) = self.index[gi];
            let (cj, pj) = self.index[gj];
            let (ck, pk) = self.index[gk];
            let value = self.fp.m3(
                &self.fp.basis_extended(ci)[pi],
                &self.fp.basis_extended(cj)[pj],
                &self.fp.basis_extended(ck)[pk],
            );
            let coords = self.to_coords(&value);
            self.m3.insert(key, coords);
        }
        &self.m3[&key]
    }

    fn m1_elem(&self, x: &CoordView) -> CoordView {
        let mut out = CoordView::zero(x.cd + 1);
        if x.is_zero() || x.cd >= self.offsets.len() {
            return out;
        }
        let offset = self.offsets[x.cd];
        for (pos, c) in &x.coords {
            out.add_scaled(self.m1_basis(offset + pos), c);
        }
        out
    }

    fn m2_elem(&mut self, x: &CoordView, y: &CoordView) -> CoordView {
        let mut out = CoordView::zero(x.cd + y.cd);
        if x.is_zero() || y.is_zero() {
            return out;
        }
        let (ox, oy) = (self.offsets[x.cd], self.offsets[y.cd]);
        for (i, ci) in &x.coords {
            for (j, cj) in &y.coords {
                let scale = ci.clone() * cj;
                let v = self.m2_basis(ox + i, oy + j);
                out.add_scaled(v, &scale);
            }
        }
        out
    }

    fn m3_elem(&mut self, x: &CoordView, y: &CoordView, z: &CoordView) -> CoordView {
        let out_cd = (x.cd + y.cd + z.cd).saturating_sub(1);
        let mut out = CoordView::zero(out_cd);
        if x.is_zero() || y.is_zero() || z.is_zero() {
            return out;
        }
        let mid = self.fp.middle();
        // nonzero only for three plain arguments reaching past the middle
        if x.cd > mid || y.cd > mid || z.cd > mid || x.cd + y.cd + z.cd < mid + 2 {
            return out;
        }
        let (ox, oy, oz) = (self.offsets[x.cd], self.offsets[y.cd], self.offsets[z.cd]);
        for (i, ci) in &x.coords {
            for (j, cj) in &y.coords {
                let cij = ci.clone() * cj;
                for (k, ck) in &z.coords {
                    let scale = cij.clone() * ck;
                    let v = self.m3_basis(ox + i, oy + j, oz + k);
                    out.add_scaled(v, &scale);
                }
            }
        }
        out
    }

    fn render(&self, x: &CoordView) -> String {
        let basis = self.fp.basis_extended(x.cd);
        if x.is_zero() {
            return "0".into();
        }
        let mut acc = FilteredElement::zero(self.fp.p(), x.cd);
        for (pos, c) in &x.coords {
            acc = acc.add(&basis[*pos].scaled(c));
        }
        acc.to_string()
    }
}

fn sign_of(parity: usize) -> Scalar {
    if parity % 2 == 0 {
        scalar::int(1)
    } else {
        scalar::int(-1)
    }
}

/// Verifies the A-infinity relations of arity 1..=5 (every higher arity
/// vanishes identically because the products stop at `m3`), plus graded
/// commutativity and the unit law of `m2`, on exhaustive or seeded-sampled
/// basis tuples.
pub fn stasheff_check(fp: &FpComplex, cfg: &SuiteConfig) -> IdentityReport {
    let mut report = IdentityReport::new("stasheff", fp.ops().model().name(), fp.p());
    let mut tables = SuiteTables::new(fp);
    let total = tables.len();

    // arity 1: the complex axiom
    let mut arity1 = IdentityResult::exhaustive("A-infinity relation, arity 1");
    for i in 0..total {
        let lhs = tables.m1_elem(&tables.m1_basis(i).clone());
        arity1.record(lhs.is_zero(), || Counterexample {
            inputs: vec![tables.element(i).to_string()],
            lhs: tables.render(&lhs),
            rhs: "0".into(),
        });
    }
    report.push(arity1);

    // unit law of m2
    let mut unit = IdentityResult::exhaustive("m2 unit law");
    let one = tables.singleton(0);
    assert!(tables.element(0).form() == &Form::one(), "unit is basis 0");
    for i in 0..total {
        let x = tables.singleton(i);
        let left = tables.m2_elem(&one, &x);
        let right = tables.m2_elem(&x, &one);
        let ok = left == x && right == x;
        unit.record(ok, || Counterexample {
            inputs: vec![tables.element(i).to_string()],
            lhs: tables.render(&left),
            rhs: tables.render(&right),
        });
    }
    report.push(unit);

    // vanishing range of the filtered spaces
    let mut range = IdentityResult::exhaustive("filtered forms vanish above the middle band");
    for k in 0..=fp.ops().dim() {
        let dim = fp.ops().filtered_basis(fp.p(), k).len();
        let ok = if k <= fp.middle() { dim > 0 } else { dim == 0 };
        range.record(ok, || Counterexample {
            inputs: vec![format!("form degree {k}")],
            lhs: dim.to_string(),
            rhs: if k <= fp.middle() { "> 0" } else { "0" }.to_string(),
        });
    }
    report.push(range);

    // graded commutativity of m2
    let graded = checked_identity(
        &mut tables,
        "m2 graded commutativity",
        2,
        cfg,
        |tables, idx, coeffs| {
            let x = scaled_singleton(tables, idx[0], coeffs.map(|c| &c[0]));
            let y = scaled_singleton(tables, idx[1], coeffs.map(|c| &c[1]));
            let mut acc = tables.m2_elem(&x, &y);
            let swapped = tables.m2_elem(&y, &x);
            let sign = sign_of(tables.cd(idx[0]) * tables.cd(idx[1]) + 1);
            acc.add_scaled(&swapped, &sign);
            acc
        },
    );
    report.push(graded);

    // arity 2: Leibniz rule
    let arity2 = checked_identity(
        &mut tables,
        "A-infinity relation, arity 2",
        2,
        cfg,
        |tables, idx, coeffs| {
            let x = scaled_singleton(tables, idx[0], coeffs.map(|c| &c[0]));
            let y = scaled_singleton(tables, idx[1], coeffs.map(|c| &c[1]));
            let m2xy = tables.m2_elem(&x, &y);
            let mut acc = tables.m1_elem(&m2xy);
            let d_x = tables.m1_elem(&x);
            acc.add_scaled(&tables.m2_elem(&d_x, &y), &scalar::int(-1));
            let d_y = tables.m1_elem(&y);
            let sign = sign_of(tables.cd(idx[0]) + 1);
            acc.add_scaled(&tables.m2_elem(&x, &d_y), &sign);
            acc
        },
    );
    report.push(arity2);

    // arity 3: associativity up to the homotopy m3
    let arity3 = checked_identity(
        &mut tables,
        "A-infinity relation, arity 3",
        3,
        cfg,
        |tables, idx, coeffs| {
            let a = scaled_singleton(tables, idx[0], coeffs.map(|c| &c[0]));
            let b = scaled_singleton(tables, idx[1], coeffs.map(|c| &c[1]));
            let c = scaled_singleton(tables, idx[2], coeffs.map(|c| &c[2]));
            let (da, db) = (tables.cd(idx[0]), tables.cd(idx[1]));

            let m3abc = tables.m3_elem(&a, &b, &c);
            let mut acc = tables.m1_elem(&m3abc);
            let m2ab = tables.m2_elem(&a, &b);
            acc.add_scaled(&tables.m2_elem(&m2ab, &c), &scalar::int(1));
            let m2bc = tables.m2_elem(&b, &c);
            acc.add_scaled(&tables.m2_elem(&a, &m2bc), &scalar::int(-1));
            let d_a = tables.m1_elem(&a);
            acc.add_scaled(&tables.m3_elem(&d_a, &b, &c), &scalar::int(1));
            let d_b = tables.m1_elem(&b);
            acc.add_scaled(&tables.m3_elem(&a, &d_b, &c), &sign_of(da));
            let d_c = tables.m1_elem(&c);
            acc.add_scaled(&tables.m3_elem(&a, &b, &d_c), &sign_of(da + db));
            acc
        },
    );
    report.push(arity3);

    // arity 4
    let arity4 = checked_identity(
        &mut tables,
        "A-infinity relation, arity 4",
        4,
        cfg,
        |tables, idx, coeffs| {
            let a = scaled_singleton(tables, idx[0], coeffs.map(|c| &c[0]));
            let b = scaled_singleton(tables, idx[1], coeffs.map(|c| &c[1]));
            let c = scaled_singleton(tables, idx[2], coeffs.map(|c| &c[2]));
            let d = scaled_singleton(tables, idx[3], coeffs.map(|c| &c[3]));
            let da = tables.cd(idx[0]);

            let mut acc = CoordView::zero(0);
            let m3abc = tables.m3_elem(&a, &b, &c);
            acc.add_scaled(&tables.m2_elem(&m3abc, &d), &scalar::int(-1));
            let m3bcd = tables.m3_elem(&b, &c, &d);
            acc.add_scaled(&tables.m2_elem(&a, &m3bcd), &sign_of(da + 1));
            let m2ab = tables.m2_elem(&a, &b);
            acc.add_scaled(&tables.m3_elem(&m2ab, &c, &d), &scalar::int(1));
            let m2bc = tables.m2_elem(&b, &c);
            acc.add_scaled(&tables.m3_elem(&a, &m2bc, &d), &scalar::int(-1));
            let m2cd = tables.m2_elem(&c, &d);
            acc.add_scaled(&tables.m3_elem(&a, &b, &m2cd), &scalar::int(1));
            acc
        },
    );
    report.push(arity4);

    // arity 5: every term routes one m3 output (barred) into another m3
    let arity5 = checked_identity(
        &mut tables,
        "A-infinity relation, arity 5",
        5,
        cfg,
        |tables, idx, coeffs| {
            let a = scaled_singleton(tables, idx[0], coeffs.map(|c| &c[0]));
            let b = scaled_singleton(tables, idx[1], coeffs.map(|c| &c[1]));
            let c = scaled_singleton(tables, idx[2], coeffs.map(|c| &c[2]));
            let d = scaled_singleton(tables, idx[3], coeffs.map(|c| &c[3]));
            let e = scaled_singleton(tables, idx[4], coeffs.map(|c| &c[4]));
            let (da, db) = (tables.cd(idx[0]), tables.cd(idx[1]));

            let mut acc = CoordView::zero(0);
            let inner = tables.m3_elem(&a, &b, &c);
            acc.add_scaled(&tables.m3_elem(&inner, &d, &e), &scalar::int(1));
            let inner = tables.m3_elem(&b, &c, &d);
            acc.add_scaled(&tables.m3_elem(&a, &inner, &e), &sign_of(da));
            let inner = tables.m3_elem(&c, &d, &e);
            acc.add_scaled(&tables.m3_elem(&a, &b, &inner), &sign_of(da + db));
            acc
        },
    );
    report.push(arity5);

    // informational: whether m3 with a unit argument ever fails to vanish
    let mut m3_unit = IdentityResult::exhaustive("m3 with a unit argument (informational)");
    let mut nonzero = 0u64;
    for i in 0..total {
        for j in 0..total {
            if !tables.is_plain(i) || !tables.is_plain(j) {
                continue;
            }
            let one = tables.singleton(0);
            let x = tables.singleton(i);
            let y = tables.singleton(j);
            for value in [
                tables.m3_elem(&one, &x, &y),
                tables.m3_elem(&x, &one, &y),
                tables.m3_elem(&x, &y, &one),
            ] {
                m3_unit.checked += 1;
                if !value.is_zero() {
                    nonzero += 1;
                }
            }
        }
    }
    m3_unit.note = Some(format!(
        "{nonzero} nonzero values observed; recorded, not asserted"
    ));
    report.push(m3_unit);

    report
}

fn scaled_singleton(tables: &SuiteTables, idx: usize, c: Option<&Scalar>) -> CoordView {
    let mut e = tables.singleton(idx);
    if let Some(c) = c {
        for entry in &mut e.coords {
            entry.1 *= c;
        }
    }
    e
}

/// Runs one multilinear identity over tuples of basis elements, exhaustive
/// within the budget, sampled otherwise.
fn checked_identity(
    tables: &mut SuiteTables,
    name: &str,
    arity: usize,
    cfg: &SuiteConfig,
    eval: impl Fn(&mut SuiteTables, &[usize], Option<&[Scalar]>) -> CoordView,
) -> IdentityResult {
    let total = tables.len();
    let stream = TupleStream::new(vec![total; arity], cfg);
    let mut result = IdentityResult::new(name, stream.mode());
    stream.run(|idx, coeffs| {
        let acc = eval(tables, idx, coeffs);
        result.record(acc.is_zero(), || Counterexample {
            inputs: idx
                .iter()
                .enumerate()
                .map(|(slot, &i)| {
                    let e = tables.element(i);
                    match coeffs.map(|c| &c[slot]) {
                        None => e.to_string(),
                        Some(c) if c == &scalar::one() => e.to_string(),
                        Some(c) => format!("{} · {}", scalar::format_scalar(c), e),
                    }
                })
                .collect(),
            lhs: tables.render(&acc),
            rhs: "0".into(),
        });
    });
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::MultiIndex;
    use crate::model::kt4;
    use crate::scalar::{int, ratio};

    fn mono(labels: &[u8]) -> Form {
        Form::monomial(MultiIndex::new(labels.to_vec()).unwrap(), int(1))
    }

    fn fp0() -> FpComplex {
        let ops = Arc::new(LefschetzOps::new(Arc::new(kt4())));
        FpComplex::new(ops, 0).unwrap()
    }

    #[test]
    fn complex_dimensions_on_kt4() {
        let fp = fp0();
        let dims: Vec<usize> = (0..=fp.top_degree()).map(|cd| fp.basis(cd).len()).collect();
        assert_eq!(dims, vec![1, 4, 5, 5, 4, 1]);
    }

    #[test]
    fn d_plus_examples() {
        let fp = fp0();
        assert_eq!(fp.d_plus(&Form::generator(4)).unwrap(), mono(&[2, 3]));
        assert!(fp.d_plus(&mono(&[1, 4])).unwrap().is_zero());
        assert!(fp.d_plus(&Form::one()).unwrap().is_zero());
        // omega is not 0-filtered
        let omega = &mono(&[1, 2]) + &mono(&[3, 4]);
        assert!(fp.d_plus(&omega).is_err());
    }

    #[test]
    fn d_minus_examples() {
        let fp = fp0();
        assert!(fp.d_minus(&Form::generator(4)).unwrap().is_zero());
        assert!(fp.d_minus(&Form::generator(1)).unwrap().is_zero());
        assert_eq!(fp.d_minus(&mono(&[1, 4])).unwrap(), -&Form::generator(3));
    }

    #[test]
    fn m1_middle_arrow_is_second_order() {
        let fp = fp0();
        // d e14 = -omega ∧ e3, so ∂₋ e14 = -e3 and ∂₊∂₋ e14 = -∂₊e3 = 0
        let x = fp.plain(mono(&[1, 4])).unwrap();
        assert!(fp.m1(&x).is_zero());
        // a nonzero middle image: ∂₋ e34 has ∂₊-image on kt4? d(e34) = 0, so no.
        // use e12: d e12 = 0 as well; on kt4 the middle map vanishes identically.
        for e in fp.basis(2) {
            assert!(fp.m1(e).is_zero());
        }
    }

    #[test]
    fn m2_examples() {
        let fp = fp0();
        let e1 = fp.plain(Form::generator(1)).unwrap();
        let e2 = fp.plain(Form::generator(2)).unwrap();
        let product = fp.m2(&e1, &e2);
        let expected = fp
            .plain((&mono(&[1, 2]) - &mono(&[3, 4])).scaled(&ratio(1, 2)))
            .unwrap();
        assert_eq!(product, expected);

        let e14 = fp.plain(mono(&[1, 4])).unwrap();
        let barred_e23 = fp.barred(mono(&[2, 3])).unwrap();
        let product = fp.m2(&e14, &barred_e23);
        let expected = fp.barred(Form::one().scaled(&ratio(1, 2))).unwrap();
        assert_eq!(product, expected);
    }

    #[test]
    fn m2_unit_property() {
        let fp = fp0();
        let one = fp.unit();
        for e in fp.all_basis() {
            assert_eq!(fp.m2(&one, &e), e);
            assert_eq!(fp.m2(&e, &one), e);
        }
    }

    #[test]
    fn m3_examples() {
        let fp = fp0();
        let e14 = fp.plain(mono(&[1, 4])).unwrap();
        let e1 = fp.plain(Form::generator(1)).unwrap();
        let e2 = fp.plain(Form::generator(2)).unwrap();
        let e3 = fp.plain(Form::generator(3)).unwrap();
        let e4 = fp.plain(Form::generator(4)).unwrap();

        assert!(fp.m3(&e14, &e1, &e4).is_zero());

        // frozen from the step-by-step decomposition oracle:
        // bracket = e4 ∧ e3, reflect = -e34, project = (e12 - e34)/2
        let value = fp.m3(&e14, &e2, &e3);
        let expected = fp
            .barred((&mono(&[1, 2]) - &mono(&[3, 4])).scaled(&ratio(1, 2)))
            .unwrap();
        assert_eq!(value, expected);

        // below the degree window the product vanishes
        assert!(fp.m3(&e1, &e2, &e3).is_zero());
    }

    /// Independent oracle for the m3 example: walk the displayed formula
    /// one operator at a time with hand-expanded intermediates.
    #[test]
    fn m3_oracle_walkthrough() {
        let ops = LefschetzOps::new(Arc::new(kt4()));
        // strip(e2 ∧ e3) with one omega removed: e23 is primitive -> 0
        assert!(ops.strip_omega(1, &mono(&[2, 3])).is_zero());
        // e14 ∧ e2 = -e124, which is omega ∧ (-e4)
        let w = mono(&[1, 4]).wedge(&Form::generator(2));
        assert_eq!(w, -&mono(&[1, 2, 4]));
        assert_eq!(ops.strip_omega(1, &w), -&Form::generator(4));
        // bracket = 0 - (-e4) ∧ e3 = e4 ∧ e3 = -e34
        let bracket = -&(-&Form::generator(4)).wedge(&Form::generator(3));
        assert_eq!(bracket, Form::generator(4).wedge(&Form::generator(3)));
        assert_eq!(bracket, -&mono(&[3, 4]));
        // reflect(-e34) = -e34, project to the primitive part
        assert_eq!(ops.reflect(&bracket), bracket);
        let projected = ops.project_filtered(0, &bracket);
        assert_eq!(projected, (&mono(&[1, 2]) - &mono(&[3, 4])).scaled(&ratio(1, 2)));
    }

    #[test]
    fn stasheff_suite_passes_on_kt4_p0() {
        let fp = fp0();
        let report = stasheff_check(&fp, &SuiteConfig::exhaustive());
        assert!(
            report.passed(),
            "failures: {:?}",
            report
                .identities
                .iter()
                .filter(|i| !i.passed())
                .map(|i| (&i.name, &i.failures))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn iw6_middle_map_is_nonzero() {
        // frozen by hand: on iw6 the primitive 3-form e356 has
        // d_minus-part -e15 - e26, and d of that is -2 e124, primitive
        let ops = LefschetzOps::new(Arc::new(crate::model::iw6()));
        let x = mono(&[3, 5, 6]);
        assert!(ops.poisson_contract(&x).is_zero());
        let (_, minus) = ops.d_split(&x);
        assert_eq!(minus, -&(&mono(&[1, 5]) + &mono(&[2, 6])));
        let (plus_of_minus, _) = ops.d_split(&minus);
        assert_eq!(plus_of_minus, mono(&[1, 2, 4]).scaled(&int(-2)));
    }

    #[test]
    fn flipped_middle_sign_breaks_arity_2() {
        // the middle differential vanishes identically on kt4 and the
        // tori, so the injection is only visible on iw6
        let ops = Arc::new(LefschetzOps::new(Arc::new(crate::model::iw6())));
        let fp = FpComplex::with_fault(ops, 0, Fault::FlipMiddleDifferentialSign).unwrap();
        let cfg = SuiteConfig {
            budget: 40_000,
            ..SuiteConfig::default()
        };
        let report = stasheff_check(&fp, &cfg);
        let arity2 = report
            .identities
            .iter()
            .find(|i| i.name == "A-infinity relation, arity 2")
            .unwrap();
        assert!(!arity2.passed());
        assert!(!arity2.failures.is_empty());
    }

    #[test]
    fn stasheff_suite_passes_on_iw6_p0() {
        let ops = Arc::new(LefschetzOps::new(Arc::new(crate::model::iw6())));
        let fp = FpComplex::new(ops, 0).unwrap();
        let cfg = SuiteConfig {
            budget: 40_000,
            samples: 2_000,
            ..SuiteConfig::default()
        };
        let report = stasheff_check(&fp, &cfg);
        assert!(
            report.passed(),
            "failures: {:?}",
            report
                .identities
                .iter()
                .filter(|i| !i.passed())
                .map(|i| (&i.name, &i.failures))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn p_out_of_range_is_rejected() {
        let ops = Arc::new(LefschetzOps::new(Arc::new(kt4())));
        assert!(matches!(
            FpComplex::new(ops, 3),
            Err(Error::FiltrationOutOfRange { p: 3, n: 2 })
        ));
    }
}
