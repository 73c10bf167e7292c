mod common;

use common::*;
use morley_ns::mesh::{generate_voronoi_mesh, PolygonalMesh};
use morley_ns::morley::{build_local_ops, MorleyDofLayout, StabScaling};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn setup(mesh: &PolygonalMesh) -> (Vec<morley_ns::morley::MorleyLocalOps>, usize) {
    (build_local_ops(mesh, StabScaling::Unscaled).unwrap(), MorleyDofLayout::new(mesh).num_dofs())
}

#[test]
fn identities_on_every_family() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (name, mesh) in family_meshes(9) {
        let (ops, dim) = setup(&mesh);
        assert!(skew_worst(&ops, dim, &mut rng, 50) < 1e-12, "{name}");
        assert!(a_consistency_worst(&mesh, &ops, &mut rng) < 1e-12, "{name}");
        assert!(jacobian_fd_worst(&ops, dim, 0.3, &mut rng) < 1e-6, "{name}");
        assert!(div_curl_worst(&mesh, dim, &mut rng) < 1e-12, "{name}");
    }
}

#[test]
fn homogenized_stabilization_keeps_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mesh = generate_voronoi_mesh(25, 10, 2).unwrap();
    let ops = build_local_ops(&mesh, StabScaling::Homogenized).unwrap();
    let w = a_consistency_worst(&mesh, &ops, &mut rng);
    assert!(w < 1e-12, "{w:e}");
}

#[test]
fn stiffness_is_symmetric_positive_semidefinite() {
    let mesh = generate_voronoi_mesh(30, 10, 8).unwrap();
    let (ops, _) = setup(&mesh);
    for o in &ops {
        let a = &o.stiffness;
        assert!((a - a.transpose()).norm() <= 1e-12 * a.norm());
        let min = a.clone().symmetric_eigenvalues().min();
        assert!(min > -1e-10 * a.norm());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_voronoi_meshes(seed in any::<u64>(), seeds in 4usize..40) {
        let mesh = generate_voronoi_mesh(seeds, 5, seed).unwrap();
        let (ops, dim) = setup(&mesh);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        prop_assert!(skew_worst(&ops, dim, &mut rng, 5) < 1e-12);
        prop_assert!(a_consistency_worst(&mesh, &ops, &mut rng) < 1e-12);
        prop_assert!(div_curl_worst(&mesh, dim, &mut rng) < 1e-12);
    }

    #[test]
    fn star_cells(seed in any::<u64>(), n in 3usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mesh = single_cell(&star_polygon(&mut rng, n, [0.3, -0.2], 0.7));
        let (ops, dim) = setup(&mesh);
        prop_assert!(skew_worst(&ops, dim, &mut rng, 5) < 1e-12);
        prop_assert!(a_consistency_worst(&mesh, &ops, &mut rng) < 1e-12);
        prop_assert!(jacobian_fd_worst(&ops, dim, 1.0, &mut rng) < 1e-6);
    }
}
