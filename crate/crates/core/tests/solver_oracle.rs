use std::sync::Arc;

use cnr_core::engine::play;
use cnr_core::graphs::{cycle_graph, hypercube, path_graph, product, random_tree, single, ExplicitGraph, ProductGraph};
use cnr_core::solver::{self, cop_number, extract_cops, extract_robber, GameValue, SolverError};
use proptest::prelude::*;

fn closed(g: &ExplicitGraph, v: usize) -> Vec<usize> {
    let mut c: Vec<usize> = g.neighbors(v).iter().map(|&w| w as usize).collect();
    c.push(v);
    c.sort_unstable();
    c
}

fn joint_moves(g: &ExplicitGraph, cops: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &c in cops {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                closed(g, c).into_iter().map(move |w| {
                    let mut p = prefix.clone();
                    p.push(w);
                    p
                })
            })
            .collect();
    }
    out
}

/// Plain game-tree search: can the cops (to move) force capture within `t` rounds?
fn cops_win_within(g: &ExplicitGraph, cops: &[usize], r: usize, t: usize) -> bool {
    if cops.contains(&r) {
        return true;
    }
    if t == 0 {
        return false;
    }
    joint_moves(g, cops).iter().any(|next| {
        next.contains(&r)
            || closed(g, r).into_iter().all(|r2| next.contains(&r2) || cops_win_within(g, next, r2, t - 1))
    })
}

/// Oracle value of a cop-to-move state, `None` if above `horizon`.
fn oracle_value(g: &ExplicitGraph, cops: &[usize], r: usize, horizon: usize) -> Option<usize> {
    (0..=horizon).find(|&t| cops_win_within(g, cops, r, t))
}

fn oracle_capture_time(g: &ExplicitGraph, k: usize, horizon: usize) -> Option<usize> {
    let v = g.vertex_count();
    let mut placements = vec![Vec::new()];
    for _ in 0..k {
        placements = placements
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                let lo = p.last().copied().unwrap_or(0);
                (lo..v).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    placements
        .iter()
        .filter_map(|p| (0..v).map(|r| oracle_value(g, p, r, horizon)).try_fold(0, |acc, x| x.map(|x| acc.max(x))))
        .min()
}

#[test]
fn paths_match_brute_force() {
    for n in 1..=8 {
        let p = path_graph(n).unwrap();
        let t = solver::capture_time(p.explicit(), 1).unwrap() as usize;
        assert_eq!(Some(t), oracle_capture_time(p.explicit(), 1, 6), "P{n}");
        assert_eq!(t, n - 1 - (n - 1) / 2, "P{n}");
    }
}

#[test]
fn every_state_matches_brute_force_on_small_graphs() {
    let graphs: Vec<(ProductGraph, usize)> = vec![
        (single(path_graph(4).unwrap()), 1),
        (single(cycle_graph(4).unwrap()), 1),
        (single(cycle_graph(5).unwrap()), 2),
        (hypercube(3).unwrap(), 2),
        (product(vec![Arc::new(path_graph(2).unwrap()), Arc::new(path_graph(3).unwrap())]).unwrap(), 1),
    ];
    let horizon = 3;
    for (g, k) in graphs {
        let ex = g.explicit().unwrap();
        let table = solver::solve(ex, k).unwrap();
        for rank in 0..table.multiset_count() {
            let ms: Vec<usize> = table.multiset(rank).iter().map(|&x| x as usize).collect();
            for r in 0..ex.vertex_count() {
                let want = oracle_value(ex, &ms, r, horizon);
                let got = table.cop_value(&ms, r);
                match want {
                    Some(w) => assert_eq!(got, GameValue::Finite(w as u32), "{} {ms:?} {r}", g.name()),
                    None => assert!(got > GameValue::Finite(horizon as u32), "{} {ms:?} {r}", g.name()),
                }
            }
        }
    }
}

#[test]
fn hypercube_cop_numbers() {
    for (n, want) in [(1, 1), (2, 2), (3, 2), (4, 3)] {
        let q = hypercube(n).unwrap();
        assert_eq!(cop_number(q.explicit().unwrap(), 3), Ok(want), "Q{n}");
    }
    let q2 = hypercube(2).unwrap();
    assert_eq!(cop_number(q2.explicit().unwrap(), 1), Err(SolverError::CopNumberExceeds(1)));
}

#[test]
fn grid_and_tree_product_capture_times() {
    let g = product(vec![Arc::new(path_graph(3).unwrap()), Arc::new(path_graph(5).unwrap())]).unwrap();
    assert_eq!(solver::capture_time(g.explicit().unwrap(), 2), Ok(3));
    for seed in 0..5u64 {
        let a = random_tree(2 + seed as usize % 5, seed).unwrap();
        let b = random_tree(3 + seed as usize % 4, seed + 100).unwrap();
        let g = product(vec![Arc::new(a), Arc::new(b)]).unwrap();
        let t = solver::capture_time(g.explicit().unwrap(), 2).unwrap();
        assert_eq!(t as usize, g.diameter() / 2, "{seed}");
    }
}

#[test]
fn extracted_strategies_realize_small_examples() {
    let cases: Vec<(ProductGraph, usize, usize)> = vec![
        (single(path_graph(4).unwrap()), 1, 2),
        (single(path_graph(1).unwrap()), 1, 0),
        (product(vec![Arc::new(path_graph(3).unwrap()), Arc::new(path_graph(5).unwrap())]).unwrap(), 2, 3),
    ];
    for (g, k, want) in cases {
        let table = Arc::new(solver::solve(g.explicit().unwrap(), k).unwrap());
        let mut c = extract_cops(table.clone());
        let mut r = extract_robber(table);
        let t = play(&g, k, &mut c, &mut r, 100, 0).unwrap();
        assert_eq!(t.length(), want, "{}", g.name());
        assert!(t.is_captured());
    }
}

#[test]
fn optimal_robber_avoids_cops_when_it_can() {
    let q3 = hypercube(3).unwrap();
    let table = solver::solve(q3.explicit().unwrap(), 2).unwrap();
    let ex = q3.explicit().unwrap();
    for rank in 0..table.multiset_count() {
        let ms: Vec<usize> = table.multiset(rank).iter().map(|&x| x as usize).collect();
        for r in 0..8 {
            if ms.contains(&r) {
                continue;
            }
            let safe = closed(ex, r).into_iter().any(|w| !ms.contains(&w));
            let (to, _) = table.best_robber_move(&ms, r);
            if safe {
                assert!(!ms.contains(&to), "{ms:?} {r} -> {to}");
            }
        }
    }
}

fn small_graph() -> impl Strategy<Value = ProductGraph> {
    let factor = prop_oneof![
        (1usize..5).prop_map(|m| path_graph(m).unwrap()),
        (3usize..5).prop_map(|m| cycle_graph(m).unwrap()),
        (1usize..5, any::<u64>()).prop_map(|(s, seed)| random_tree(s, seed).unwrap()),
    ];
    prop::collection::vec(factor, 1..3)
        .prop_map(|fs| product(fs.into_iter().map(Arc::new).collect()).unwrap())
        .prop_filter("small", |g| g.vertex_count().unwrap() <= 16)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bellman_relations_hold(g in small_graph(), k in 1usize..3) {
        let ex = g.explicit().unwrap();
        let table = solver::solve(ex, k).unwrap();
        for rank in 0..table.multiset_count() {
            let ms: Vec<usize> = table.multiset(rank).iter().map(|&x| x as usize).collect();
            for r in 0..ex.vertex_count() {
                let c = table.cop_value(&ms, r);
                let rv = table.robber_value(&ms, r);
                if ms.contains(&r) {
                    prop_assert_eq!(c, GameValue::Finite(0));
                    prop_assert_eq!(rv, GameValue::Finite(0));
                    continue;
                }
                prop_assert!(c != GameValue::Finite(0));
                let best_next = table
                    .successor_cop_sets(&ms)
                    .iter()
                    .map(|next| table.robber_value(next, r))
                    .min()
                    .unwrap();
                let expect = match best_next {
                    GameValue::Finite(v) => GameValue::Finite(v + 1),
                    GameValue::Unbounded => GameValue::Unbounded,
                };
                prop_assert_eq!(c, expect);
                let best_robber = closed(ex, r).into_iter().map(|w| table.cop_value(&ms, w)).max().unwrap();
                prop_assert_eq!(rv, best_robber);
            }
        }
    }

    #[test]
    fn values_ignore_cop_order(g in small_graph(), a in 0usize..16, b in 0usize..16, r in 0usize..16) {
        let ex = g.explicit().unwrap();
        let v = ex.vertex_count();
        let table = solver::solve(ex, 2).unwrap();
        let (a, b, r) = (a % v, b % v, r % v);
        prop_assert_eq!(table.cop_value(&[a, b], r), table.cop_value(&[b, a], r));
        prop_assert_eq!(table.robber_value(&[a, b], r), table.robber_value(&[b, a], r));
    }

    #[test]
    fn more_cops_never_slower(g in small_graph()) {
        let ex = g.explicit().unwrap();
        let times: Vec<GameValue> = (1..=3)
            .map(|k| {
                let t = solver::solve(ex, k).unwrap();
                t.best_placement().1
            })
            .collect();
        prop_assert!(times[1] <= times[0]);
        prop_assert!(times[2] <= times[1]);
    }

    #[test]
    fn extracted_play_matches_capture_time(g in small_graph(), k in 1usize..3, seed in any::<u64>()) {
        let ex = g.explicit().unwrap();
        let table = Arc::new(solver::solve(ex, k).unwrap());
        if let Some(capt) = table.capture_time() {
            let mut c = extract_cops(table.clone());
            let mut r = extract_robber(table.clone());
            let t = play(&g, k, &mut c, &mut r, 200, seed).unwrap();
            prop_assert!(t.is_captured());
            prop_assert_eq!(t.length(), capt as usize);
        }
    }
}
