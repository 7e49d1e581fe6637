use std::sync::Arc;

use cnr_core::graphs::{
    cycle_graph, hypercube, path_graph, product, random_tree, tree_step_toward, FactorGraph, ProductGraph,
};
use proptest::prelude::*;

fn factor_strategy() -> impl Strategy<Value = FactorGraph> {
    prop_oneof![
        (1usize..6).prop_map(|m| path_graph(m).unwrap()),
        (3usize..6).prop_map(|m| cycle_graph(m).unwrap()),
        (1usize..7, any::<u64>()).prop_map(|(s, seed)| random_tree(s, seed).unwrap()),
    ]
}

fn small_product() -> impl Strategy<Value = ProductGraph> {
    prop::collection::vec(factor_strategy(), 1..4)
        .prop_map(|fs| product(fs.into_iter().map(Arc::new).collect()).unwrap())
}

proptest! {
    #[test]
    fn product_distance_matches_bfs(g in small_product()) {
        let ex = g.explicit().expect("small products are explicit");
        let count = ex.vertex_count();
        for s in 0..count {
            let dist = ex.bfs(s);
            let u = g.vertex_at(s);
            for (t, d) in dist.into_iter().enumerate() {
                prop_assert_eq!(Some(g.distance(&u, &g.vertex_at(t)) as u32), d);
            }
        }
    }

    #[test]
    fn neighbors_change_one_coordinate(g in small_product()) {
        let count = g.vertex_count().unwrap() as usize;
        for idx in 0..count {
            let u = g.vertex_at(idx);
            let mut seen = 0;
            for w in g.neighbors(&u) {
                prop_assert_eq!(u.differing_coords(&w).count(), 1);
                prop_assert_eq!(g.distance(&u, &w), 1);
                prop_assert!(g.is_adjacent(&u, &w));
                seen += 1;
            }
            prop_assert_eq!(seen, g.degree(&u));
            prop_assert_eq!(seen, g.explicit().unwrap().degree(idx));
        }
    }

    #[test]
    fn product_radius_is_sum_of_factor_radii(g in small_product()) {
        let bfs = g.explicit().unwrap().metrics().unwrap();
        let m = g.metrics();
        prop_assert_eq!(m.radius, bfs.radius);
        prop_assert_eq!(m.diameter, bfs.diameter);
        // the factor-center tuple is central in the product
        let c = g.index_of(&m.center).unwrap();
        let ecc = g.explicit().unwrap().bfs(c).into_iter().map(|d| d.unwrap()).max().unwrap();
        prop_assert_eq!(ecc as usize, m.radius);
    }

    #[test]
    fn tree_step_decreases_distance(size in 2usize..40, seed in any::<u64>(), a in 0usize..40, b in 0usize..40) {
        let t = random_tree(size, seed).unwrap();
        let (a, b) = (a % size, b % size);
        prop_assume!(a != b);
        let w = tree_step_toward(&t, a, b).unwrap();
        prop_assert!(t.is_adjacent(a, w));
        prop_assert_eq!(t.distance(w, b) + 1, t.distance(a, b));
    }

    #[test]
    fn random_trees_are_trees_and_deterministic(size in 1usize..200, seed in any::<u64>()) {
        let t = random_tree(size, seed).unwrap();
        prop_assert!(t.explicit().is_tree());
        prop_assert!(t.is_tree());
        let again = random_tree(size, seed).unwrap();
        prop_assert_eq!(t.explicit(), again.explicit());
    }
}

#[test]
fn hypercube_radius_matches_bfs_up_to_ten() {
    for n in 1..=10 {
        let q = hypercube(n).unwrap();
        let m = q.explicit().unwrap().metrics().unwrap();
        assert_eq!(q.radius(), n);
        assert_eq!(m.radius, n);
        assert_eq!(m.diameter, n);
    }
}

#[test]
fn exhaustive_distance_check_on_largest_explicit_cube() {
    // Q_12 has exactly 4096 vertices
    let q = hypercube(12).unwrap();
    let ex = q.explicit().unwrap();
    for s in [0usize, 1, 1234, 4095] {
        let u = q.vertex_at(s);
        for (t, d) in ex.bfs(s).into_iter().enumerate() {
            assert_eq!(Some(q.distance(&u, &q.vertex_at(t)) as u32), d);
        }
    }
}

#[test]
fn random_tree_edge_distribution_looks_uniform() {
    // Cayley: 16 labeled trees on 4 vertices, 12 paths and 4 stars.
    let mut stars = 0;
    for seed in 0..4000u64 {
        let t = random_tree(4, seed).unwrap();
        if (0..4).any(|v| t.degree(v) == 3) {
            stars += 1;
        }
    }
    let frac = stars as f64 / 4000.0;
    assert!((frac - 0.25).abs() < 0.03, "star fraction {frac}");
}
