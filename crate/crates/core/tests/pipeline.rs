use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use udl_core::bounds::{self, GaussRational, GroupSpec};
use udl_core::config::{self, build_config, choose_params, PointSet};
use udl_core::gaussian::{self, GaussInt};
use udl_core::paths;
use udl_core::udgraph::{self, build_graph, degree_summary, peel};

#[test]
fn emitted_points_rebuild_the_same_graph() {
    for n in [16u64, 100, 400, 1000] {
        let params = choose_params(n).unwrap();
        let points = build_config(&params);
        assert_eq!(points.len() as u64, params.side * params.side);
        let reparsed = PointSet::parse(&points.to_text()).unwrap();
        assert_eq!(reparsed, points);
        let a = build_graph(&points, params.m).unwrap();
        let b = build_graph(&reparsed, params.m).unwrap();
        assert_eq!(a.edge_list_text(), b.edge_list_text());
    }
}

#[test]
fn every_direction_of_the_n10000_configuration_is_in_the_group() {
    let params = choose_params(10_000).unwrap();
    let gens = config::generators(&params).unwrap();
    let g = build_graph(&build_config(&params), params.m).unwrap();
    let dirs: BTreeSet<GaussInt> = g
        .edges()
        .flat_map(|(u, v)| {
            let d = g.point(v) - g.point(u);
            [d, -d]
        })
        .collect();
    assert_eq!(dirs.len(), 1 << (params.r + 1));
    let reps = gaussian::representations(&params.primes).unwrap();
    assert_eq!(dirs, reps);
    let mut selections = BTreeSet::new();
    for d in dirs {
        let sel = config::verify_edge_in_group(d, &gens).unwrap();
        selections.insert((sel.conjugated.clone(), sel.unit));
    }
    // each direction is a distinct (selection, unit) combination
    assert_eq!(selections.len(), 1 << (params.r + 1));
}

#[test]
fn foreign_vectors_are_rejected() {
    let params = choose_params(400).unwrap();
    let gens = config::generators(&params).unwrap();
    assert!(config::verify_edge_in_group(GaussInt::new(1, 8), &gens).is_ok());
    assert!(config::verify_edge_in_group(GaussInt::new(3, 4), &gens).is_err());
    assert!(config::verify_edge_in_group(GaussInt::new(0, 0), &gens).is_err());
}

#[test]
fn peeled_graphs_meet_the_path_lower_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [100u64, 400, 2000] {
        let params = choose_params(n).unwrap();
        let g = build_graph(&build_config(&params), params.m).unwrap();
        let h = peel(&g, udgraph::default_peel_threshold(&g));
        let delta = degree_summary(&h).min_degree as u64;
        let starts: Vec<usize> = (0..20).map(|_| rng.gen_range(0..h.vertex_count())).collect();
        for k in 1..=4 {
            let counts = paths::counts_from(&h, &starts, k).unwrap();
            let bound = paths::path_count_lower_bound(delta, k);
            assert!(counts.iter().all(|c| c.count >= bound), "n = {n}, k = {k}");
            let projected = paths::projected_steps(&h, &starts, k);
            assert!(counts.iter().map(|c| c.count as u128).sum::<u128>() <= projected);
        }
    }
}

#[test]
fn pair_counts_sum_to_total_paths() {
    let params = choose_params(400).unwrap();
    let g = build_graph(&build_config(&params), params.m).unwrap();
    for k in 1..=3 {
        let pairs = paths::pair_counts(&g, k).unwrap();
        let best = paths::max_pair_count(&g, k).unwrap();
        let sum: u64 = pairs.iter().map(|p| p.count).sum();
        assert_eq!(sum, best.total.count);
        assert_eq!(pairs.iter().map(|p| p.count).max().unwrap(), best.count());
        assert!(pairs.iter().all(|p| p.v != p.w));
        let starts: Vec<usize> = (0..g.vertex_count()).collect();
        let per_start: u64 = paths::counts_from(&g, &starts, k).unwrap().iter().map(|c| c.count).sum();
        assert_eq!(per_start, sum);
    }
}

#[test]
fn enumerated_paths_are_irredundant() {
    let params = choose_params(400).unwrap();
    let g = build_graph(&build_config(&params), params.m).unwrap();
    let v = g.index_of(GaussInt::new(10, 10)).unwrap();
    let found = paths::enumerate_irredundant_from(&g, v, 3).unwrap();
    assert_eq!(found.len() as u64, paths::count_irredundant_from(&g, v, 3).unwrap().count);
    for p in &found {
        assert!(paths::is_irredundant(p).unwrap());
        assert!(p.vectors.iter().all(|d| d.norm() == params.m));
    }
}

#[test]
fn pair_counts_stay_below_the_unit_equation_bound() {
    for n in [100u64, 400, 1000] {
        let params = choose_params(n).unwrap();
        let g = build_graph(&build_config(&params), params.m).unwrap();
        for k in 1..=3 {
            let c = paths::max_pair_count(&g, k).unwrap().count();
            assert!((c as f64).log2() <= bounds::log2_a(k as u64, params.group_rank() as u64));
        }
    }
}

#[test]
fn bound_table_for_the_configurations() {
    for j in 2..=7 {
        let n = 10u64.pow(j);
        let r = choose_params(n).unwrap().group_rank() as u64;
        let rows = bounds::bound_rows(n, r, 0.5, 2..=6).unwrap();
        assert!(rows.windows(2).all(|w| w[0].log2_a < w[1].log2_a));
        let csv = bounds::rows_to_csv(&rows);
        assert_eq!(csv.lines().count(), 6);
        let window = bounds::optimal_k_window((n as f64).ln(), r, 1.0).unwrap();
        assert!(window.in_window, "n = {n}");
    }
}

#[test]
fn unit_equation_over_a_mixed_group() {
    // ⟨ζ₆⟩ · ⟨1 + i⟩ with a = (1, 1, −1)
    let group = GroupSpec::new(6, vec![GaussRational::int(1, 1)]).unwrap();
    let coeffs = [GaussRational::int(1, 0), GaussRational::int(1, 0), GaussRational::int(-1, 0)];
    let sols = bounds::enumerate_nondegenerate(&coeffs, &group, 2).unwrap();
    for sol in &sols.solutions {
        assert!(bounds::no_vanishing_subsum(
            &sol.iter()
                .zip(&coeffs)
                .map(|(z, a)| z * &bounds::Cyclo12::from(a))
                .collect::<Vec<_>>()
        ));
    }
    let check = bounds::solution_count_check(&sols, 3, group.rank());
    assert!(check.log2_count <= check.log2_bound);
    let inverted = bounds::enumerate_nondegenerate(&coeffs, &group.inverted(), 2).unwrap();
    assert_eq!(inverted.count, sols.count);
}
