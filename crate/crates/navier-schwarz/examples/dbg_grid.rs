//! Scratch diagnostic: spectral radius of the ORAS error propagator with a
//! lumped edge mass in the interface impedance term, versus the consistent
//! edge mass, on decompositions with a cross point.

use num_complex::Complex64;
use std::collections::HashMap;
use navier_schwarz::*;

struct Locals {
    factors: Vec<SparseFactorization>,
}

thread_local! {
    static ZONE_L: std::cell::Cell<f64> = const { std::cell::Cell::new(0.15) };
    static SIGMA_SCALE: std::cell::Cell<bool> = const { std::cell::Cell::new(false) };
    static RAMP: std::cell::Cell<bool> = const { std::cell::Cell::new(false) };
}

fn build_locals(
    mesh: &TriangleMesh,
    decomposition: &Decomposition,
    media: &[ElasticMedium],
    omega: f64,
    bcs: &BoundaryConditions,
    theta: f64,
) -> Result<Locals> {
    let mut factors = Vec::new();
    for (i, dofs) in decomposition.subdomain_dofs.iter().enumerate() {
        let sub = extract_submesh(mesh, &decomposition.element_sets[i])?;
        let space = VectorP1Space::new(&sub.mesh);
        let local =
            assemble_local_oras(&sub.mesh, &space, media, omega, bcs, &sub.interface_edges)?;
        let m = dofs.len();
        let position: HashMap<usize, usize> =
            dofs.iter().enumerate().map(|(p, &d)| (d, p)).collect();
        let perm: Vec<usize> = sub.dof_map.iter().map(|gd| position[gd]).collect();
        let mut triplets = Vec::with_capacity(local.nnz() + 8 * sub.interface_edges.len());
        for r in 0..m {
            let (cols, vals) = local.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                triplets.push((perm[r], perm[c], v));
            }
        }
        if theta > 0.0 {
            // Corner-zone tangential stiffness: on interface edges within
            // distance zone_l of an artificial-boundary corner, add
            // gamma int_e du/dtau dv/dtau ds with gamma = theta rho cs^3 /
            // omega. Real positive term absorbing mesh-scale kink modes.
            let medium = &media[0];
            let zone_l = ZONE_L.with(|z| z.get());
            let is_interface: std::collections::HashSet<usize> =
                sub.interface_edges.iter().copied().collect();
            let mut per_vertex: HashMap<usize, Vec<[f64; 2]>> = HashMap::new();
            let mut vertex_has_interface: HashMap<usize, bool> = HashMap::new();
            for (e, edge) in sub.mesh.boundary_edges.iter().enumerate() {
                let interface = is_interface.contains(&e);
                let nrm = sub.mesh.edge_normal(edge);
                for &v in &edge.v {
                    per_vertex.entry(v).or_default().push(nrm);
                    *vertex_has_interface.entry(v).or_default() |= interface;
                }
            }
            // Cross-point corners only: two interface edges meeting at an
            // angle. Junctions of an interface with the outer boundary are
            // stable without treatment.
            let mut interface_normals: HashMap<usize, Vec<[f64; 2]>> = HashMap::new();
            for &e in &sub.interface_edges {
                let edge = &sub.mesh.boundary_edges[e];
                let nrm = sub.mesh.edge_normal(edge);
                for &v in &edge.v {
                    interface_normals.entry(v).or_default().push(nrm);
                }
            }
            let mut corners: Vec<[f64; 2]> = Vec::new();
            for (&v, normals) in &interface_normals {
                let bent = normals.iter().any(|na| {
                    normals.iter().any(|nb| na[0] * nb[0] + na[1] * nb[1] < 0.999)
                });
                if bent {
                    corners.push(sub.mesh.vertices[v]);
                }
            }
            let _ = &per_vertex;
            let _ = &vertex_has_interface;
            let gamma = theta * medium.rho * medium.cs.powi(3) / omega;
            for &e in &sub.interface_edges {
                let edge = &sub.mesh.boundary_edges[e];
                let (a, b) = (sub.mesh.vertices[edge.v[0]], sub.mesh.vertices[edge.v[1]]);
                let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
                let dist = corners
                    .iter()
                    .map(|c| {
                        let (dx, dy) = (mid[0] - c[0], mid[1] - c[1]);
                        (dx * dx + dy * dy).sqrt()
                    })
                    .fold(f64::INFINITY, f64::min);
                if dist >= zone_l {
                    continue;
                }
                let len = sub.mesh.edge_length(edge);
                if SIGMA_SCALE.with(|s| s.get()) {
                    // Scale the -i sigma edge mass by (1 + profile) instead.
                    let ramp = if RAMP.with(|r| r.get()) { 1.0 - dist / zone_l } else { 1.0 };
                    let nrm = sub.mesh.edge_normal(edge);
                    let sg = absorbing_sigma(medium, omega, nrm);
                    let wmass = [[2.0f64, 1.0], [1.0, 2.0]];
                    for ia in 0..2 {
                        for ib in 0..2 {
                            let scale = Complex64::new(0.0, -theta * ramp)
                                * (len / 6.0)
                                * wmass[ia][ib];
                            for ca in 0..2 {
                                for cb in 0..2 {
                                    let r = perm[2 * edge.v[ia] + ca];
                                    let cc = perm[2 * edge.v[ib] + cb];
                                    triplets.push((r, cc, scale * sg[ca][cb]));
                                }
                            }
                        }
                    }
                    continue;
                }
                let w = [[1.0f64, -1.0], [-1.0, 1.0]];
                for ia in 0..2 {
                    for ib in 0..2 {
                        let val = Complex64::new(gamma / len * w[ia][ib], 0.0);
                        for c in 0..2 {
                            let r = perm[2 * edge.v[ia] + c];
                            let cc = perm[2 * edge.v[ib] + c];
                            triplets.push((r, cc, val));
                        }
                    }
                }
            }
        }
        let matrix = ComplexSparseMatrix::from_triplets(m, m, &triplets)?;
        factors.push(factorize(&matrix).map_err(|err| {
            eprintln!("subdomain {i} factorization failed");
            err
        })?);
    }
    Ok(Locals { factors })
}

fn apply_m(decomposition: &Decomposition, locals: &Locals, r: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); r.len()];
    for i in 0..decomposition.n_subdomains() {
        let local_r = decomposition.restrict(i, r);
        let solved = locals.factors[i].solve(&local_r);
        decomposition.extend_owned_add(i, &solved, &mut out);
    }
    out
}

fn spectral_radius(
    matrix: &ComplexSparseMatrix,
    decomposition: &Decomposition,
    locals: &Locals,
) -> f64 {
    let n = matrix.n_rows();
    let mut v: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.37).cos()))
        .collect();
    let mut rho = 0.0;
    for _ in 0..80 {
        let av = matrix.matvec(&v);
        let mv = apply_m(decomposition, locals, &av);
        let w: Vec<Complex64> = v.iter().zip(&mv).map(|(a, b)| a - b).collect();
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        rho = norm;
        v = w.iter().map(|z| z / norm).collect();
    }
    rho
}

fn stationary(
    system: &AssembledSystem,
    decomposition: &Decomposition,
    locals: &Locals,
    max_iters: usize,
    tol: f64,
) -> (usize, f64, bool) {
    let exact = system.exact_solution.as_ref().unwrap();
    let norm0 = exact.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let n = system.matrix.n_rows();
    let mut x = vec![Complex64::default(); n];
    for it in 1..=max_iters {
        let ax = system.matrix.matvec(&x);
        let r: Vec<Complex64> = system.rhs.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let mx = apply_m(decomposition, locals, &r);
        for (xi, mi) in x.iter_mut().zip(&mx) {
            *xi += mi;
        }
        let err = x
            .iter()
            .zip(exact)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
            / norm0;
        if err <= tol {
            return (it, err, true);
        }
        if !err.is_finite() || err > 1e8 {
            return (it, err, false);
        }
    }
    let ax = system.matrix.matvec(&x);
    let err = x.iter().zip(exact).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt() / norm0;
    let _ = ax;
    (max_iters, err, false)
}

fn run_case(n: usize, px: usize, py: usize, layers: usize, omega: f64, theta: f64) -> Result<()> {
    let medium = ElasticMedium::from_speeds(1.0, 1.0, 0.5)?;
    let mesh = build_rect_mesh(n, n, [0.0, 1.0], [0.0, 1.0])?;
    let space = VectorP1Space::new(&mesh);
    let d = PLANE_WAVE_DIRECTION;
    let g = |x: [f64; 2], nrm: [f64; 2]| plane_wave_abc_data(x, omega, &medium, d, nrm);
    let bcs = BoundaryConditions::new()
        .set(SideTag::Left, BcKind::Absorbing { data: Some(&g) })
        .set(SideTag::Right, BcKind::Absorbing { data: Some(&g) })
        .set(SideTag::Top, BcKind::Absorbing { data: Some(&g) })
        .set(SideTag::Bottom, BcKind::Absorbing { data: Some(&g) });
    let media = [medium];
    let f = |x: [f64; 2]| plane_wave_source(x, omega, &medium, d);
    let mut system = assemble_navier(&mesh, &space, &media, omega, &bcs, Some(&f))?;
    system.exact_solution = Some(factorize(&system.matrix)?.solve(&system.rhs));
    let owner = partition_elements(&mesh, PartitionStrategy::Grid { px, py })?;
    let decomposition = grow_overlap(&mesh, &owner, layers)?;
    let locals = build_locals(&mesh, &decomposition, &media, omega, &bcs, theta)?;
    let ppw = 2.0 * std::f64::consts::PI * 0.5 / omega * n as f64;
    if theta > 0.0 {
        let (iters, err, ok) = stationary(&system, &decomposition, &locals, 1500, 1e-6);
        println!(
            "n={n} {px}x{py} l={layers} omega={omega} ppw={ppw:.0} theta={theta}: \
             {} after {iters} iters (err {err:.3e})",
            if ok { "converged" } else { "stopped" }
        );
    } else {
        println!("n={n} {px}x{py} l={layers} omega={omega} ppw={ppw:.0} theta={theta}:");
    }

    // GMRES comparison with the same modified ORAS versus plain RAS.
    let config = KrylovConfig { tol: 1e-6, max_iters: 400, restart: None };
    let apply_a = |v: &[Complex64]| system.matrix.matvec(v);
    let apply_oras = |r: &[Complex64]| apply_m(&decomposition, &locals, r);
    let (_, h_oras) = gmres(&apply_a, Some(&apply_oras), &system.rhs, &config, None)?;
    let ras = setup_ras(&decomposition, &system.matrix)?;
    let apply_ras = |r: &[Complex64]| ras.apply(r);
    let (_, h_ras) = gmres(&apply_a, Some(&apply_ras), &system.rhs, &config, None)?;
    println!(
        "  gmres oras: {} {} | gmres ras: {} {}",
        h_oras.final_flag().as_str(),
        h_oras.iterations(),
        h_ras.final_flag().as_str(),
        h_ras.iterations()
    );
    Ok(())
}

fn main() -> Result<()> {
    SIGMA_SCALE.with(|s| s.set(true));
    ZONE_L.with(|z| z.set(0.04));
    println!("cross-only zone 0.04 extra 6:");
    run_case(160, 4, 4, 3, 5.0, 6.0)?;
    run_case(80, 2, 2, 1, 5.0, 6.0)?;
    run_case(40, 2, 2, 1, 5.0, 6.0)?;
    Ok(())
}
