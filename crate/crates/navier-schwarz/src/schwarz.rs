//! Restricted additive Schwarz preconditioners, classical (RAS) and
//! optimized (ORAS), plus the stationary Schwarz iteration.
//!
//! Both preconditioners share the form `M^{-1} = sum_i R_i^T D_i L_i^{-1} R_i`
//! with `D_i` the 0/1 ownership indicator of the unoverlapped partition (the
//! "restricted" extension; averaging the overlap instead corrupts the
//! transmission traces and makes ORAS divergent). RAS takes
//! `L_i = R_i A R_i^T`, the plain submatrix of the assembled operator. ORAS
//! re-assembles each local operator with the zeroth-order optimized
//! transmission term on interface edges, then eliminates the subdomain's
//! share of the global Dirichlet dofs so the local solve agrees with the
//! global elimination. Local solves run in a deterministic order, so
//! repeated applications are bit-identical.

use num_complex::Complex64;

use crate::decomposition::{extract_submesh, Decomposition};
use crate::factor::{factorize, SparseFactorization};
use crate::fem::{assemble_local_oras, l2_norm, AssembledSystem, BoundaryConditions, VectorP1Space};
use crate::history::{ConvergenceHistory, IterationFlag};
use crate::mesh::TriangleMesh;
use crate::sparse::{vec_norm, vec_sub, ComplexSparseMatrix};
use crate::{ElasticMedium, Error, Result};

/// Which family of local operators backs the preconditioner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreconditionerKind {
    Ras,
    Oras,
}

impl PreconditionerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PreconditionerKind::Ras => "ras",
            PreconditionerKind::Oras => "oras",
        }
    }
}

/// One-level Schwarz preconditioner with factorized local operators, indexed
/// like the decomposition's subdomains.
pub struct SchwarzPreconditioner<'a> {
    decomposition: &'a Decomposition,
    kind: PreconditionerKind,
    factors: Vec<SparseFactorization>,
}

/// RAS setup: factorizes `R_i A R_i^T` for every subdomain.
pub fn setup_ras<'a>(
    decomposition: &'a Decomposition,
    matrix: &ComplexSparseMatrix,
) -> Result<SchwarzPreconditioner<'a>> {
    if matrix.n_rows() != decomposition.n_dofs {
        return Err(Error::Usage("matrix size does not match the decomposition".into()));
    }
    let mut factors = Vec::with_capacity(decomposition.n_subdomains());
    for (i, dofs) in decomposition.subdomain_dofs.iter().enumerate() {
        let local = matrix.submatrix(dofs)?;
        factors.push(factorize(&local).map_err(|e| tag_subdomain(e, i))?);
    }
    Ok(SchwarzPreconditioner { decomposition, kind: PreconditionerKind::Ras, factors })
}

/// ORAS setup: assembles and factorizes each optimized local operator `B_i`.
/// `global_dirichlet` lists the dofs eliminated in the global system; their
/// local counterparts are forced to identity rows for consistency.
pub fn setup_oras<'a>(
    decomposition: &'a Decomposition,
    mesh: &TriangleMesh,
    media: &[ElasticMedium],
    omega: f64,
    outer_bcs: &BoundaryConditions,
    global_dirichlet: &[usize],
) -> Result<SchwarzPreconditioner<'a>> {
    if 2 * mesh.n_vertices() != decomposition.n_dofs {
        return Err(Error::Usage("mesh does not match the decomposition".into()));
    }
    let mut is_dirichlet = vec![false; decomposition.n_dofs];
    for &d in global_dirichlet {
        is_dirichlet[d] = true;
    }
    let mut factors = Vec::with_capacity(decomposition.n_subdomains());
    for (i, dofs) in decomposition.subdomain_dofs.iter().enumerate() {
        let sub = extract_submesh(mesh, &decomposition.element_sets[i])?;
        let space = VectorP1Space::new(&sub.mesh);
        let local =
            assemble_local_oras(&sub.mesh, &space, media, omega, outer_bcs, &sub.interface_edges)?;
        // Renumber from submesh order to the ascending dof-set order used by
        // the restriction, dropping rows/cols of globally eliminated dofs.
        let m = dofs.len();
        assert_eq!(sub.dof_map.len(), m, "submesh dofs disagree with the decomposition");
        let position: std::collections::HashMap<usize, usize> =
            dofs.iter().enumerate().map(|(p, &d)| (d, p)).collect();
        let perm: Vec<usize> = sub.dof_map.iter().map(|gd| position[gd]).collect();
        let eliminated: Vec<bool> = dofs.iter().map(|&d| is_dirichlet[d]).collect();
        let mut triplets = Vec::with_capacity(local.nnz() + m);
        for r in 0..m {
            let (cols, vals) = local.row(r);
            let pr = perm[r];
            if eliminated[pr] {
                continue;
            }
            for (&c, &v) in cols.iter().zip(vals) {
                let pc = perm[c];
                if !eliminated[pc] {
                    triplets.push((pr, pc, v));
                }
            }
        }
        for (p, &gone) in eliminated.iter().enumerate() {
            if gone {
                triplets.push((p, p, Complex64::new(1.0, 0.0)));
            }
        }
        let renumbered = ComplexSparseMatrix::from_triplets(m, m, &triplets)?;
        factors.push(factorize(&renumbered).map_err(|e| tag_subdomain(e, i))?);
    }
    Ok(SchwarzPreconditioner { decomposition, kind: PreconditionerKind::Oras, factors })
}

fn tag_subdomain(e: Error, i: usize) -> Error {
    match e {
        Error::SingularFactorization { .. } => {
            Error::SingularFactorization { subdomain: Some(i) }
        }
        other => other,
    }
}

impl SchwarzPreconditioner<'_> {
    pub fn kind(&self) -> PreconditionerKind {
        self.kind
    }

    /// `M^{-1} r = sum_i R_i^T D_i L_i^{-1} R_i r`.
    pub fn apply(&self, residual: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); self.decomposition.n_dofs];
        for i in 0..self.factors.len() {
            let local = self.decomposition.restrict(i, residual);
            let solved = self.factors[i].solve(&local);
            self.decomposition.extend_owned_add(i, &solved, &mut out);
        }
        out
    }
}

/// Stationary Schwarz iteration `u <- u + M^{-1}(b - A u)`.
///
/// Progress is measured relative to the initial state: the L2 error
/// `|u - u_n| / |u - u_0|` through the mass matrix when the system carries an
/// exact solution, the Euclidean residual `|b - A u_n| / |b - A u_0|`
/// otherwise. A measure above 1e8 (or non-finite) stops early as divergence;
/// hitting `max_iters` with the measure still above 1 is also flagged
/// divergent.
pub fn stationary_iterate(
    system: &AssembledSystem,
    precond: &SchwarzPreconditioner,
    u0: &[Complex64],
    max_iters: usize,
    tol: f64,
) -> Result<(Vec<Complex64>, ConvergenceHistory)> {
    if !(tol > 0.0) {
        return Err(Error::Usage(format!("tolerance must be positive, got {tol}")));
    }
    let n = system.matrix.n_rows();
    if u0.len() != n {
        return Err(Error::Usage("initial guess length does not match the system".into()));
    }
    let exact = system.exact_solution.as_deref();
    let err_denom = exact.map(|u| l2_norm(&system.mass, &vec_sub(u, u0)));
    let res_denom = vec_norm(&vec_sub(&system.rhs, &system.matrix.matvec(u0)));

    let mut u = u0.to_vec();
    let mut history = ConvergenceHistory::default();
    for iter in 0..=max_iters {
        let residual = vec_sub(&system.rhs, &system.matrix.matvec(&u));
        let rel_residual =
            if res_denom > 0.0 { vec_norm(&residual) / res_denom } else { 0.0 };
        let rel_error = match (exact, err_denom) {
            (Some(star), Some(d)) if d > 0.0 => l2_norm(&system.mass, &vec_sub(star, &u)) / d,
            (Some(_), Some(_)) => 0.0,
            _ => f64::NAN,
        };
        let measure = if rel_error.is_nan() { rel_residual } else { rel_error };
        let flag = if !measure.is_finite() || measure > 1e8 {
            IterationFlag::Diverged
        } else if measure <= tol {
            IterationFlag::Converged
        } else if iter == max_iters {
            if measure > 1.0 {
                IterationFlag::Diverged
            } else {
                IterationFlag::MaxIters
            }
        } else {
            IterationFlag::Running
        };
        history.push(iter, rel_error, rel_residual, flag);
        if flag != IterationFlag::Running {
            break;
        }
        let correction = precond.apply(&residual);
        for (ui, ci) in u.iter_mut().zip(&correction) {
            *ui += ci;
        }
    }
    Ok((u, history))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{grow_overlap, partition_elements, PartitionStrategy};
    use crate::fem::{assemble_navier, plane_wave_abc_data, BcKind};
    use crate::mesh::{build_rect_mesh, SideTag};

    fn medium() -> ElasticMedium {
        ElasticMedium::from_speeds(1.0, 1.0, 0.5).unwrap()
    }

    fn abc_system(nx: usize, ny: usize, omega: f64) -> (TriangleMesh, AssembledSystem) {
        let mesh = build_rect_mesh(nx, ny, [0.0, 1.0], [0.0, 1.0]).unwrap();
        let space = VectorP1Space::new(&mesh);
        let m = medium();
        let data =
            move |p: [f64; 2], n: [f64; 2]| plane_wave_abc_data(p, omega, &m, [0.5, 0.5], n);
        let bcs = BoundaryConditions::new()
            .set(SideTag::Left, BcKind::Absorbing { data: Some(&data) })
            .set(SideTag::Right, BcKind::Absorbing { data: Some(&data) })
            .set(SideTag::Top, BcKind::Absorbing { data: Some(&data) })
            .set(SideTag::Bottom, BcKind::Absorbing { data: Some(&data) });
        let system = assemble_navier(&mesh, &space, &[m], omega, &bcs, None).unwrap();
        (mesh, system)
    }

    #[test]
    fn single_subdomain_ras_is_a_direct_solve() {
        let (mesh, system) = abc_system(4, 4, 2.0);
        let owner = partition_elements(&mesh, PartitionStrategy::Grid { px: 1, py: 1 }).unwrap();
        let d = grow_overlap(&mesh, &owner, 0).unwrap();
        let pre = setup_ras(&d, &system.matrix).unwrap();
        let direct = factorize(&system.matrix).unwrap().solve(&system.rhs);
        let applied = pre.apply(&system.rhs);
        let err = vec_norm(&vec_sub(&applied, &direct)) / vec_norm(&direct);
        assert!(err <= 1e-12, "direct-solve mismatch: {err}");
        let (u, history) = stationary_iterate(&system, &pre, &vec![Complex64::default(); system.rhs.len()], 10, 1e-10).unwrap();
        assert!(history.converged() && history.iterations() == 1);
        let err = vec_norm(&vec_sub(&u, &direct)) / vec_norm(&direct);
        assert!(err <= 1e-12);
    }

    #[test]
    fn preconditioner_is_linear() {
        let (mesh, system) = abc_system(6, 6, 3.0);
        let owner = partition_elements(&mesh, PartitionStrategy::Grid { px: 2, py: 1 }).unwrap();
        let d = grow_overlap(&mesh, &owner, 1).unwrap();
        let pre = setup_ras(&d, &system.matrix).unwrap();
        let n = system.rhs.len();
        let r1: Vec<Complex64> =
            (0..n).map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.7).cos())).collect();
        let r2: Vec<Complex64> =
            (0..n).map(|i| Complex64::new((i as f64 * 1.3).cos(), -(i as f64 * 0.2).sin())).collect();
        let (alpha, beta) = (Complex64::new(0.8, -1.1), Complex64::new(-0.3, 2.0));
        let combined: Vec<Complex64> =
            r1.iter().zip(&r2).map(|(a, b)| alpha * a + beta * b).collect();
        let lhs = pre.apply(&combined);
        let (m1, m2) = (pre.apply(&r1), pre.apply(&r2));
        let rhs: Vec<Complex64> = m1.iter().zip(&m2).map(|(a, b)| alpha * a + beta * b).collect();
        let scale = vec_norm(&rhs);
        assert!(vec_norm(&vec_sub(&lhs, &rhs)) <= 1e-12 * scale);
    }

    #[test]
    fn solution_is_a_fixed_point_of_both_kinds() {
        let omega = 3.0;
        let mesh = build_rect_mesh(10, 6, [0.0, 2.0], [0.0, 1.0]).unwrap();
        let space = VectorP1Space::new(&mesh);
        let m = medium();
        let zero = |_: [f64; 2]| [Complex64::default(); 2];
        let bcs = BoundaryConditions::new()
            .set(SideTag::Left, BcKind::Absorbing { data: None })
            .set(SideTag::Right, BcKind::Absorbing { data: None })
            .set(SideTag::Top, BcKind::Dirichlet(&zero))
            .set(SideTag::Bottom, BcKind::Dirichlet(&zero));
        let source = |p: [f64; 2]| {
            [Complex64::new(p[0] * p[1], 1.0), Complex64::new(1.0 - p[1], p[0])]
        };
        let system =
            assemble_navier(&mesh, &space, &[m], omega, &bcs, Some(&source)).unwrap();
        let star = factorize(&system.matrix).unwrap().solve(&system.rhs);
        let owner = partition_elements(&mesh, PartitionStrategy::Grid { px: 2, py: 1 }).unwrap();
        let d = grow_overlap(&mesh, &owner, 1).unwrap();
        let scale = vec_norm(&star);
        for pre in [
            setup_ras(&d, &system.matrix).unwrap(),
            setup_oras(&d, &mesh, &[m], omega, &bcs, &system.dirichlet_dofs).unwrap(),
        ] {
            let residual = vec_sub(&system.rhs, &system.matrix.matvec(&star));
            let step = pre.apply(&residual);
            assert!(
                vec_norm(&step) <= 1e-12 * scale,
                "{:?} moved the solution by {}",
                pre.kind(),
                vec_norm(&step) / scale
            );
        }
    }

    #[test]
    fn singular_local_factorization_names_the_subdomain() {
        let d = Decomposition {
            n_dofs: 4,
            overlap_layers: 0,
            element_sets: vec![vec![], vec![]],
            subdomain_dofs: vec![vec![0, 1], vec![2, 3]],
            pou_weights: vec![vec![1.0, 1.0], vec![1.0, 1.0]],
            owner_weights: vec![vec![1.0, 1.0], vec![1.0, 1.0]],
        };
        let one = Complex64::new(1.0, 0.0);
        let matrix = ComplexSparseMatrix::from_triplets(
            4,
            4,
            &[(0, 0, one), (1, 1, one), (2, 2, one), (3, 3, Complex64::default())],
        )
        .unwrap();
        match setup_ras(&d, &matrix).map(|_| ()) {
            Err(Error::SingularFactorization { subdomain }) => assert_eq!(subdomain, Some(1)),
            other => panic!("expected a singular factorization, got {other:?}"),
        }
    }

    #[test]
    fn stationary_history_records_residuals_without_exact_solution() {
        let (mesh, system) = abc_system(6, 6, 2.0);
        let owner = partition_elements(&mesh, PartitionStrategy::Grid { px: 2, py: 1 }).unwrap();
        let d = grow_overlap(&mesh, &owner, 2).unwrap();
        let pre = setup_oras(
            &d,
            &mesh,
            &[medium()],
            2.0,
            &BoundaryConditions::new()
                .set(SideTag::Left, BcKind::Absorbing { data: None })
                .set(SideTag::Right, BcKind::Absorbing { data: None })
                .set(SideTag::Top, BcKind::Absorbing { data: None })
                .set(SideTag::Bottom, BcKind::Absorbing { data: None }),
            &system.dirichlet_dofs,
        )
        .unwrap();
        let u0 = vec![Complex64::default(); system.rhs.len()];
        let (_, history) = stationary_iterate(&system, &pre, &u0, 100, 1e-8).unwrap();
        assert!(history.converged(), "final flag {:?}", history.final_flag());
        assert_eq!(history.rows[0].iter, 0);
        assert!((history.rows[0].rel_residual - 1.0).abs() < 1e-14);
        assert!(history.rows[0].rel_error.is_nan());
        let csv = history.to_csv();
        assert!(csv.starts_with("iter,rel_error,rel_residual,flag\n"));
        assert!(csv.contains("nan"));
        assert!(csv.trim_end().ends_with("converged"));
    }

    #[test]
    fn stationary_rejects_bad_tolerance() {
        let (mesh, system) = abc_system(3, 3, 1.0);
        let owner = partition_elements(&mesh, PartitionStrategy::Grid { px: 1, py: 1 }).unwrap();
        let d = grow_overlap(&mesh, &owner, 0).unwrap();
        let pre = setup_ras(&d, &system.matrix).unwrap();
        let u0 = vec![Complex64::default(); system.rhs.len()];
        assert!(stationary_iterate(&system, &pre, &u0, 5, 0.0).is_err());
        assert!(stationary_iterate(&system, &pre, &u0, 5, -1.0).is_err());
    }
}
