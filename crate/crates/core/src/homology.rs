//! Exact cohomology, the Gysin-style dimension count, and the cyclic
//! pairing.
//!
//! Cohomology is computed degreewise from the differential matrices over
//! the rationals: kernel modulo image by row reduction, with
//! representatives picked deterministically from the fixed monomial
//! order. The pairing integrates the reflected product against the
//! unit-covolume orientation; nondegeneracy is a rank fact about the
//! resulting matrices between complementary degrees, and the cyclic
//! identities tie the pairing to all three products.

use std::collections::HashMap;

use num::traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::{ConeAlgebra, ConeElement};
use crate::equiv::Equivalence;
use crate::exterior::Form;
use crate::filtered::{FilteredElement, FpComplex, Side};
use crate::lefschetz::LefschetzOps;
use crate::linalg::{Matrix, Solver};
use crate::report::{CheckMode, Counterexample, IdentityReport, IdentityResult, Table};
use crate::sample::SuiteConfig;
use crate::scalar::{self, format_scalar, Scalar};

// ---------------------------------------------------------------------------
// Quotient bases
// ---------------------------------------------------------------------------

/// Rows kept in reduced echelon form for incremental membership tests.
struct EchelonSpace {
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl EchelonSpace {
    fn new() -> Self {
        EchelonSpace {
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Reduces `v` against the stored rows; the remainder is zero exactly
    /// when `v` lies in the span.
    fn reduce(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        for (row, &pivot) in self.rows.iter().zip(&self.pivots) {
            if v[pivot].is_zero() {
                continue;
            }
            let factor = v[pivot].clone();
            for (a, b) in v.iter_mut().zip(row) {
                *a -= factor.clone() * b;
            }
        }
        v
    }

    /// Inserts `v` if independent, returning whether it extended the span.
    fn insert(&mut self, v: Vec<Scalar>) -> bool {
        let mut reduced = self.reduce(v);
        let Some(pivot) = reduced.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = scalar::one() / reduced[pivot].clone();
        for x in reduced.iter_mut() {
            *x *= inv.clone();
        }
        self.rows.push(reduced);
        self.pivots.push(pivot);
        true
    }
}

struct DegreeCohomology {
    dim: usize,
    rep_coords: Vec<Vec<Scalar>>,
    /// solves `[reps | image] x = z` to express a closed vector in class
    /// coordinates (the first `dim` entries)
    class_solver: Option<Solver>,
}

/// Kernel-mod-image data for a complex given by its differential
/// matrices, `diffs[j]: V_j -> V_{j+1}` (the last one maps into zero).
fn cohomology_core(diffs: &[Matrix]) -> Vec<DegreeCohomology> {
    let mut out = Vec::with_capacity(diffs.len());
    for j in 0..diffs.len() {
        let d_out = &diffs[j];
        let space_dim = d_out.cols();
        let kernel = d_out.kernel_basis();
        let mut image = EchelonSpace::new();
        let mut image_cols: Vec<Vec<Scalar>> = Vec::new();
        if j > 0 {
            let d_in = &diffs[j - 1];
            for col in 0..d_in.cols() {
                let v: Vec<Scalar> = (0..d_in.rows()).map(|r| d_in[(r, col)].clone()).collect();
                if image.insert(v.clone()) {
                    image_cols.push(v);
                }
            }
        }
        let mut quotient = EchelonSpace::new();
        for row in &image.rows {
            quotient.insert(row.clone());
        }
        let mut rep_coords = Vec::new();
        for v in kernel {
            if quotient.insert(v.clone()) {
                rep_coords.push(v);
            }
        }
        let class_solver = if space_dim == 0 {
            None
        } else {
            let mut columns = rep_coords.clone();
            columns.extend(image_cols);
            Some(Solver::new(&Matrix::from_columns(space_dim, &columns)))
        };
        out.push(DegreeCohomology {
            dim: rep_coords.len(),
            rep_coords,
            class_solver,
        });
    }
    out
}

/// Cohomology of one complex with typed representatives.
pub struct Cohomology<T> {
    pub complex: String,
    pub model: String,
    pub p: usize,
    degrees: Vec<DegreeCohomology>,
    reps: Vec<Vec<T>>,
}

impl<T: std::fmt::Display> Cohomology<T> {
    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.dim).collect()
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.degrees.get(degree).map(|d| d.dim).unwrap_or(0)
    }

    pub fn representatives(&self, degree: usize) -> &[T] {
        self.reps.get(degree).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Class coordinates of a closed element given by its coordinates in
    /// the degree basis; `None` if the vector is not closed-mod-image
    /// consistent (i.e. does not lie in kernel + image).
    pub fn class_coords(&self, degree: usize, coords: &[Scalar]) -> Option<Vec<Scalar>> {
        let data = self.degrees.get(degree)?;
        if coords.iter().all(|c| c.is_zero()) {
            return Some(vec![scalar::zero(); data.dim]);
        }
        let solver = data.class_solver.as_ref()?;
        let x = solver.solve(coords)?;
        Some(x[..data.dim].to_vec())
    }

    /// Whether a closed element represents the zero class.
    pub fn is_exact(&self, degree: usize, coords: &[Scalar]) -> Option<bool> {
        self.class_coords(degree, coords)
            .map(|c| c.iter().all(|v| v.is_zero()))
    }

    pub fn table(&self) -> Table {
        Table {
            title: format!("cohomology of {} ({}, p = {})", self.complex, self.model, self.p),
            headers: vec!["degree".into(), "dim".into(), "representatives".into()],
            rows: self
                .reps
                .iter()
                .enumerate()
                .map(|(degree, reps)| {
                    vec![
                        degree.to_string(),
                        self.degrees[degree].dim.to_string(),
                        reps.iter()
                            .map(|r| r.to_string())
                            .collect::<Vec<_>>()
                            .join(",  "),
                    ]
                })
                .collect(),
        }
    }
}

/// De Rham cohomology of the model's invariant complex.
pub fn derham_cohomology(ops: &LefschetzOps) -> Cohomology<Form> {
    let dim = ops.dim();
    let mut diffs: Vec<Matrix> = (0..dim)
        .map(|k| ops.operator_matrix(k, k + 1, |a| ops.d(a)).matrix)
        .collect();
    diffs.push(Matrix::zeros(0, ops.monomials(dim).len()));
    let degrees = cohomology_core(&diffs);
    let reps = degrees
        .iter()
        .enumerate()
        .map(|(k, data)| {
            data.rep_coords
                .iter()
                .map(|v| {
                    let mut form = Form::zero();
                    for (ix, c) in ops.monomials(k).iter().zip(v) {
                        if !c.is_zero() {
                            form.add_term(ix.clone(), c.clone());
                        }
                    }
                    form
                })
                .collect()
        })
        .collect();
    Cohomology {
        complex: "derham".into(),
        model: ops.model().name().to_string(),
        p: 0,
        degrees,
        reps,
    }
}

/// Cohomology of the filtered complex.
pub fn filtered_cohomology(fp: &FpComplex) -> Cohomology<FilteredElement> {
    let top = fp.top_degree();
    let diffs: Vec<Matrix> = (0..=top).map(|cd| fp.differential_matrix(cd).clone()).collect();
    let degrees = cohomology_core(&diffs);
    let reps = degrees
        .iter()
        .enumerate()
        .map(|(cd, data)| {
            data.rep_coords
                .iter()
                .map(|v| fp.element_from_coords(cd, v))
                .collect()
        })
        .collect();
    Cohomology {
        complex: "filtered".into(),
        model: fp.ops().model().name().to_string(),
        p: fp.p(),
        degrees,
        reps,
    }
}

/// Cohomology of the cone.
pub fn cone_cohomology(cone: &ConeAlgebra) -> Cohomology<ConeElement> {
    let top = cone.top_degree();
    let diffs: Vec<Matrix> = (0..=top)
        .map(|k| cone.differential_matrix(k).clone())
        .collect();
    let degrees = cohomology_core(&diffs);
    let reps = degrees
        .iter()
        .enumerate()
        .map(|(k, data)| {
            data.rep_coords
                .iter()
                .map(|v| cone.element_from_coords(k, v))
                .collect()
        })
        .collect();
    Cohomology {
        complex: "cone".into(),
        model: cone.model().name().to_string(),
        p: cone.p(),
        degrees,
        reps,
    }
}

// ---------------------------------------------------------------------------
// Gysin-style dimension bookkeeping
// ---------------------------------------------------------------------------

/// Checks that the cone cohomology splits dimensionally as cokernel and
/// kernel of multiplication by the Euler power on de Rham cohomology, and
/// that the filtered cohomology matches the cone's degreewise.
pub fn gysin_check(
    ops: &LefschetzOps,
    fp: &FpComplex,
    cone: &ConeAlgebra,
) -> IdentityReport {
    let p = fp.p();
    let mut report = IdentityReport::new("gysin", ops.model().name(), p);
    let derham = derham_cohomology(ops);
    let cone_h = cone_cohomology(cone);
    let filtered_h = filtered_cohomology(fp);

    let top = cone.top_degree();
    let shift = 2 * p + 2;
    // rank of wedge-by-zeta into de Rham degree j
    let rank_into = |j: usize| -> usize {
        if j > ops.dim() || j < shift {
            return 0;
        }
        let source_degree = j - shift;
        let sources = derham.representatives(source_degree);
        if sources.is_empty() || derham.dim(j) == 0 {
            return 0;
        }
        let columns: Vec<Vec<Scalar>> = sources
            .iter()
            .map(|rep| {
                let image = cone.zeta().wedge(rep);
                let coords = ops.coords_in_degree(j, &image);
                derham
                    .class_coords(j, &coords)
                    .expect("multiplication image of a closed form is closed")
            })
            .collect();
        Matrix::from_columns(derham.dim(j), &columns).rank()
    };

    let mut split = IdentityResult::exhaustive(
        "cone cohomology = coker ⊕ ker of Euler multiplication (dimension count)",
    );
    let theta_deg = 2 * p + 1;
    for j in 0..=top {
        let h_j = if j <= ops.dim() { derham.dim(j) } else { 0 };
        let coker = h_j - rank_into(j);
        let ker_source = if j >= theta_deg && j - theta_deg <= ops.dim() {
            derham.dim(j - theta_deg)
        } else {
            0
        };
        let ker = ker_source - rank_into(j + 1);
        let expected = coker + ker;
        let actual = cone_h.dim(j);
        split.record(actual == expected, || Counterexample {
            inputs: vec![format!("degree {j}")],
            lhs: actual.to_string(),
            rhs: format!("{coker} + {ker}"),
        });
    }
    report.push(split);

    let mut matches = IdentityResult::exhaustive("filtered cohomology matches the cone degreewise");
    for j in 0..=top {
        let lhs = filtered_h.dim(j);
        let rhs = cone_h.dim(j);
        matches.record(lhs == rhs, || Counterexample {
            inputs: vec![format!("degree {j}")],
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
    }
    report.push(matches);

    report
}

/// Induced maps on cohomology are mutually inverse isomorphisms.
pub fn equivalence_cohomology_check(eq: &Equivalence) -> IdentityReport {
    let fp = eq.fp();
    let cone = eq.cone();
    let mut report = IdentityReport::new("equivalence-cohomology", fp.ops().model().name(), fp.p());
    let fh = filtered_cohomology(fp);
    let ch = cone_cohomology(cone);

    let mut inverse = IdentityResult::exhaustive("induced maps on cohomology are mutually inverse");
    for j in 0..=fp.top_degree() {
        let (df, dc) = (fh.dim(j), ch.dim(j));
        if df != dc {
            inverse.record(false, || Counterexample {
                inputs: vec![format!("degree {j}")],
                lhs: df.to_string(),
                rhs: dc.to_string(),
            });
            continue;
        }
        if df == 0 {
            inverse.record(true, || unreachable!());
            continue;
        }
        // f*: classes of the cone to classes of the filtered complex
        let f_cols: Vec<Vec<Scalar>> = ch
            .representatives(j)
            .iter()
            .map(|rep| {
                let image = eq.f(rep);
                let coords = fp.coords_of(&image).expect("f image in the complex");
                fh.class_coords(j, &coords).expect("f image is closed")
            })
            .collect();
        let g_cols: Vec<Vec<Scalar>> = fh
            .representatives(j)
            .iter()
            .map(|rep| {
                let image = eq.g(rep);
                let coords = cone.coords(&image);
                ch.class_coords(j, &coords).expect("g image is closed")
            })
            .collect();
        let f_star = Matrix::from_columns(df, &f_cols);
        let g_star = Matrix::from_columns(dc, &g_cols);
        let fg = f_star.mul_mat(&g_star);
        let gf = g_star.mul_mat(&f_star);
        let ok = fg == Matrix::identity(df) && gf == Matrix::identity(dc);
        inverse.record(ok, || Counterexample {
            inputs: vec![format!("degree {j}")],
            lhs: "f* g* or g* f*".into(),
            rhs: "identity".into(),
        });
    }
    report.push(inverse);
    report
}

// ---------------------------------------------------------------------------
// Pairing
// ---------------------------------------------------------------------------

/// `<a, b> = integral of reflect(m2(a, b))`: nonzero only when the
/// product lands in the barred degree-0 slot, i.e. when the complex
/// degrees are complementary to the pairing dimension `2(n+p)+1`.
pub fn pairing(fp: &FpComplex, a: &FilteredElement, b: &FilteredElement) -> Scalar {
    let product = fp.m2(a, b);
    if product.is_zero()
        || product.side() != Side::Barred
        || product.form().degree() != Some(0)
    {
        return scalar::zero();
    }
    let ops = fp.ops();
    ops.model().integrate(&ops.reflect(product.form()))
}

/// Pairing on the cone between complementary degrees: integrate the
/// theta-slot of the product (the theta-free slot of a top-degree product
/// always overshoots the volume degree).
pub fn cone_pairing(cone: &ConeAlgebra, x: &ConeElement, y: &ConeElement) -> Scalar {
    let product = cone.m2(x, y);
    cone.model().integrate(product.xi())
}

pub struct PairingMatrix {
    pub p: usize,
    pub degree: usize,
    pub complement_degree: usize,
    pub matrix: Matrix,
    pub rank: usize,
    pub full_rank: bool,
}

impl PairingMatrix {
    pub fn table(&self) -> Table {
        let mut rows = Vec::new();
        for i in 0..self.matrix.rows() {
            rows.push(
                (0..self.matrix.cols())
                    .map(|j| format_scalar(&self.matrix[(i, j)]))
                    .collect(),
            );
        }
        Table {
            title: format!(
                "pairing H^{} × H^{} (rank {} of {}×{})",
                self.degree,
                self.complement_degree,
                self.rank,
                self.matrix.rows(),
                self.matrix.cols()
            ),
            headers: (0..self.matrix.cols()).map(|j| format!("b{j}")).collect(),
            rows,
        }
    }
}

/// Pairing matrix between cohomology representatives in complementary
/// degrees `k` and `2(n+p)+1-k`, with the nondegeneracy verdict.
pub fn pairing_matrix(
    fp: &FpComplex,
    cohomology: &Cohomology<FilteredElement>,
    k: usize,
) -> PairingMatrix {
    let complement = fp.top_degree() - k;
    let rows_reps = cohomology.representatives(k);
    let cols_reps = cohomology.representatives(complement);
    let mut matrix = Matrix::zeros(rows_reps.len(), cols_reps.len());
    for (i, a) in rows_reps.iter().enumerate() {
        for (j, b) in cols_reps.iter().enumerate() {
            matrix[(i, j)] = pairing(fp, a, b);
        }
    }
    let rank = matrix.rank();
    let full_rank = rank == rows_reps.len() && rank == cols_reps.len();
    PairingMatrix {
        p: fp.p(),
        degree: k,
        complement_degree: complement,
        matrix,
        rank,
        full_rank,
    }
}

// ---------------------------------------------------------------------------
// Cyclic-symmetry suite
// ---------------------------------------------------------------------------

/// Enumerates (or samples) tuples of basis elements whose complex degrees
/// sum to a fixed total.
struct DegreeConstrainedTuples {
    /// (degree tuple, per-slot sizes, count)
    compositions: Vec<(Vec<usize>, Vec<usize>, u128)>,
    total: u128,
}

impl DegreeConstrainedTuples {
    fn new(sizes: &[usize], arity: usize, degree_sum: usize) -> Self {
        let mut compositions = Vec::new();
        let mut current = vec![0usize; arity];
        fn rec(
            sizes: &[usize],
            slot: usize,
            remaining: usize,
            current: &mut Vec<usize>,
            out: &mut Vec<(Vec<usize>, Vec<usize>, u128)>,
        ) {
            if slot + 1 == current.len() {
                if remaining < sizes.len() && sizes[remaining] > 0 {
                    current[slot] = remaining;
                    let slot_sizes: Vec<usize> = current.iter().map(|&d| sizes[d]).collect();
                    let count: u128 = slot_sizes.iter().map(|&s| s as u128).product();
                    out.push((current.clone(), slot_sizes, count));
                }
                return;
            }
            for d in 0..sizes.len().min(remaining + 1) {
                if sizes[d] == 0 {
                    continue;
                }
                current[slot] = d;
                rec(sizes, slot + 1, remaining - d, current, out);
            }
        }
        rec(sizes, 0, degree_sum, &mut current, &mut compositions);
        let total = compositions.iter().map(|(_, _, c)| c).sum();
        DegreeConstrainedTuples {
            compositions,
            total,
        }
    }

    fn run(
        &self,
        cfg: &SuiteConfig,
        mut visit: impl FnMut(&[usize], &[usize], &[Scalar]),
    ) -> CheckMode {
        if self.total <= cfg.budget as u128 {
            for (degrees, slot_sizes, _) in &self.compositions {
                let arity = degrees.len();
                let mut positions = vec![0usize; arity];
                let ones = vec![scalar::one(); arity];
                'tuple: loop {
                    visit(degrees, &positions, &ones);
                    let mut slot = arity;
                    while slot > 0 {
                        slot -= 1;
                        positions[slot] += 1;
                        if positions[slot] < slot_sizes[slot] {
                            continue 'tuple;
                        }
                        positions[slot] = 0;
                    }
                    break;
                }
            }
            CheckMode::Exhaustive
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            const CHOICES: [i64; 4] = [-2, -1, 1, 2];
            for _ in 0..cfg.samples {
                // composition weighted by its tuple count
                let mut pick = rng.gen_range(0..self.total);
                let mut chosen = &self.compositions[0];
                for comp in &self.compositions {
                    if pick < comp.2 {
                        chosen = comp;
                        break;
                    }
                    pick -= comp.2;
                }
                let (degrees, slot_sizes, _) = chosen;
                let positions: Vec<usize> = slot_sizes
                    .iter()
                    .map(|&s| rng.gen_range(0..s))
                    .collect();
                let coeffs: Vec<Scalar> = (0..degrees.len())
                    .map(|_| scalar::int(CHOICES[rng.gen_range(0..CHOICES.len())]))
                    .collect();
                visit(degrees, &positions, &coeffs);
            }
            CheckMode::Sampled {
                seed: cfg.seed,
                samples: cfg.samples,
            }
        }
    }
}

/// The three cyclic-symmetry identities of the pairing together with its
/// graded symmetry, on degree-complementary basis tuples.
pub fn cyclic_check(fp: &FpComplex, cfg: &SuiteConfig) -> IdentityReport {
    let mut report = IdentityReport::new("cyclic", fp.ops().model().name(), fp.p());
    let pairing_dimension = fp.top_degree();
    let sizes: Vec<usize> = (0..=fp.top_degree()).map(|cd| fp.basis(cd).len()).collect();
    let elem = |cd: usize, pos: usize| -> &FilteredElement { &fp.basis(cd)[pos] };
    let sign = |parity: usize| -> Scalar {
        if parity % 2 == 0 {
            scalar::one()
        } else {
            scalar::int(-1)
        }
    };

    let mut m2_cache: HashMap<(usize, usize, usize, usize), FilteredElement> = HashMap::new();
    let mut m3_cache: HashMap<[usize; 6], FilteredElement> = HashMap::new();

    // graded symmetry of the pairing itself
    let mut symmetry = IdentityResult::exhaustive("pairing graded symmetry");
    let tuples = DegreeConstrainedTuples::new(&sizes, 2, pairing_dimension);
    let mode = tuples.run(cfg, |degrees, positions, coeffs| {
        let (a, b) = (elem(degrees[0], positions[0]), elem(degrees[1], positions[1]));
        let scale = coeffs[0].clone() * &coeffs[1];
        let lhs = pairing(fp, a, b) * &scale;
        let rhs = pairing(fp, b, a) * &scale * sign(degrees[0] * degrees[1]);
        symmetry.record(lhs == rhs, || Counterexample {
            inputs: vec![a.to_string(), b.to_string()],
            lhs: format_scalar(&lhs),
            rhs: format_scalar(&rhs),
        });
    });
    symmetry.mode = mode;
    report.push(symmetry);

    // cyclic identity for the differential
    let mut cyclic1 = IdentityResult::exhaustive("cyclic symmetry, arity 1");
    let tuples = DegreeConstrainedTuples::new(&sizes, 2, pairing_dimension - 1);
    let mode = tuples.run(cfg, |degrees, positions, coeffs| {
        let (a, b) = (elem(degrees[0], positions[0]), elem(degrees[1], positions[1]));
        let scale = coeffs[0].clone() * &coeffs[1];
        let lhs = pairing(fp, &fp.m1(a), b) * &scale;
        let rhs = pairing(fp, &fp.m1(b), a) * &scale * sign(1 + degrees[0] * degrees[1]);
        cyclic1.record(lhs == rhs, || Counterexample {
            inputs: vec![a.to_string(), b.to_string()],
            lhs: format_scalar(&lhs),
            rhs: format_scalar(&rhs),
        });
    });
    cyclic1.mode = mode;
    report.push(cyclic1);

    // cyclic identity for the product
    let mut cyclic2 = IdentityResult::exhaustive("cyclic symmetry, arity 2");
    let tuples = DegreeConstrainedTuples::new(&sizes, 3, pairing_dimension);
    let mode = tuples.run(cfg, |degrees, positions, coeffs| {
        let (a, b, c) = (
            elem(degrees[0], positions[0]),
            elem(degrees[1], positions[1]),
            elem(degrees[2], positions[2]),
        );
        let scale = coeffs[0].clone() * &coeffs[1] * &coeffs[2];
        let key = (degrees[0], positions[0], degrees[1], positions[1]);
        let m2ab = m2_cache
            .entry(key)
            .or_insert_with(|| fp.m2(a, b))
            .clone();
        let key = (degrees[1], positions[1], degrees[2], positions[2]);
        let m2bc = m2_cache
            .entry(key)
            .or_insert_with(|| fp.m2(b, c))
            .clone();
        let lhs = pairing(fp, &m2ab, c) * &scale;
        let rhs =
            pairing(fp, &m2bc, a) * &scale * sign(degrees[0] * (degrees[1] + degrees[2]));
        cyclic2.record(lhs == rhs, || Counterexample {
            inputs: vec![a.to_string(), b.to_string(), c.to_string()],
            lhs: format_scalar(&lhs),
            rhs: format_scalar(&rhs),
        });
    });
    cyclic2.mode = mode;
    report.push(cyclic2);

    // cyclic identity for the ternary product
    let mut cyclic3 = IdentityResult::exhaustive("cyclic symmetry, arity 3");
    let tuples = DegreeConstrainedTuples::new(&sizes, 4, pairing_dimension + 1);
    let mode = tuples.run(cfg, |degrees, positions, coeffs| {
        let (a, b, c, d) = (
            elem(degrees[0], positions[0]),
            elem(degrees[1], positions[1]),
            elem(degrees[2], positions[2]),
            elem(degrees[3], positions[3]),
        );
        let scale = coeffs[0].clone() * &coeffs[1] * &coeffs[2] * &coeffs[3];
        let key = [
            degrees[0], positions[0], degrees[1], positions[1], degrees[2], positions[2],
        ];
        let m3abc = m3_cache
            .entry(key)
            .or_insert_with(|| fp.m3(a, b, c))
            .clone();
        let key = [
            degrees[1], positions[1], degrees[2], positions[2], degrees[3], positions[3],
        ];
        let m3bcd = m3_cache
            .entry(key)
            .or_insert_with(|| fp.m3(b, c, d))
            .clone();
        let lhs = pairing(fp, &m3abc, d) * &scale;
        let rhs = pairing(fp, &m3bcd, a)
            * &scale
            * sign(3 + degrees[0] * (degrees[1] + degrees[2] + degrees[3]));
        cyclic3.record(lhs == rhs, || Counterexample {
            inputs: vec![
                a.to_string(),
                b.to_string(),
                c.to_string(),
                d.to_string(),
            ],
            lhs: format_scalar(&lhs),
            rhs: format_scalar(&rhs),
        });
    });
    cyclic3.mode = mode;
    report.push(cyclic3);

    report
}

/// Compatibility of the pairing with the inclusion into the cone:
/// `<g a, g b>_cone = -<a, b>` on complementary basis pairs.
pub fn pairing_compatibility_check(eq: &Equivalence) -> IdentityReport {
    let fp = eq.fp();
    let mut report =
        IdentityReport::new("pairing-compatibility", fp.ops().model().name(), fp.p());
    let mut compat = IdentityResult::exhaustive("cone pairing of g-images is the negated pairing");
    let top = fp.top_degree();
    for cd in 0..=top {
        let complement = top - cd;
        for a in fp.basis(cd) {
            for b in fp.basis(complement) {
                let lhs = cone_pairing(eq.cone(), &eq.g(a), &eq.g(b));
                let rhs = -pairing(fp, a, b);
                compat.record(lhs == rhs, || Counterexample {
                    inputs: vec![a.to_string(), b.to_string()],
                    lhs: format_scalar(&lhs),
                    rhs: format_scalar(&rhs),
                });
            }
        }
    }
    report.push(compat);
    report
}

// ---------------------------------------------------------------------------
// Potential
// ---------------------------------------------------------------------------

pub struct PotentialValue {
    pub value: Scalar,
    /// tuples whose pairing vanished for degree/side reasons
    pub dropped_terms: u64,
    pub evaluated_terms: u64,
}

/// The action potential of a formal sum `x = sum c_i x_i`:
/// `Phi(x) = sum_l 1/(l+1) <m^l(x,...,x), x>`, a finite sum because the
/// products stop at arity 3. Terms killed by degree bookkeeping are
/// counted rather than silently ignored.
pub fn potential_phi(fp: &FpComplex, terms: &[(Scalar, FilteredElement)]) -> PotentialValue {
    let pairing_dimension = fp.top_degree();
    let mut value = scalar::zero();
    let mut dropped = 0u64;
    let mut evaluated = 0u64;
    let n = terms.len();
    // a tuple contributes only when the product's degree is complementary
    // to the last slot; mismatched tuples are counted, not silently lost
    let mut eval = |product_degree: usize, last: usize, contribution: Scalar| {
        evaluated += 1;
        if product_degree + terms[last].1.complex_degree() != pairing_dimension {
            dropped += 1;
        } else {
            value += contribution;
        }
    };
    // arity 1: 1/2 <m1 x, x>
    for i in 0..n {
        for j in 0..n {
            let c = terms[i].0.clone() * &terms[j].0;
            let v = pairing(fp, &fp.m1(&terms[i].1), &terms[j].1) * c / scalar::int(2);
            eval(terms[i].1.complex_degree() + 1, j, v);
        }
    }
    // arity 2: 1/3 <m2(x,x), x>
    for i in 0..n {
        for j in 0..n {
            let m2ij = fp.m2(&terms[i].1, &terms[j].1);
            let product_degree = terms[i].1.complex_degree() + terms[j].1.complex_degree();
            for k in 0..n {
                let c = terms[i].0.clone() * &terms[j].0 * &terms[k].0;
                let v = pairing(fp, &m2ij, &terms[k].1) * c / scalar::int(3);
                eval(product_degree, k, v);
            }
        }
    }
    // arity 3: 1/4 <m3(x,x,x), x>
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let m3ijk = fp.m3(&terms[i].1, &terms[j].1, &terms[k].1);
                let product_degree = (terms[i].1.complex_degree()
                    + terms[j].1.complex_degree()
                    + terms[k].1.complex_degree())
                .saturating_sub(1);
                for l in 0..n {
                    let c =
                        terms[i].0.clone() * &terms[j].0 * &terms[k].0 * &terms[l].0;
                    let v = pairing(fp, &m3ijk, &terms[l].1) * c / scalar::int(4);
                    eval(product_degree, l, v);
                }
            }
        }
    }
    PotentialValue {
        value,
        dropped_terms: dropped,
        evaluated_terms: evaluated,
    }
}
