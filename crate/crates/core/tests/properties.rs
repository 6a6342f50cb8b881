mod common;

use domgame_core::graph::{
    leaf_pair_at_distance, parse_edge_list, random_caterpillar, random_forest, to_edge_list, Forest,
};
use domgame_core::residual::{Color, ResidualState};
use domgame_core::solver::{domination_number, game_dom_number, Player};
use domgame_core::strategy::{max_gain, run_game, StallerPolicy};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(cases) }
}

/// A random isolate-free forest and a position reached by random play.
fn position() -> impl Strategy<Value = ResidualState> {
    (2usize..=16, any::<u64>(), prop::collection::vec(any::<usize>(), 0..10)).prop_map(|(n, seed, picks)| {
        let k = 1 + (seed as usize % (n / 2));
        let f = random_forest(n, k, seed).unwrap();
        let mut s = ResidualState::new(&f).unwrap();
        for p in picks {
            let legal = s.legal_moves();
            if legal.is_empty() {
                break;
            }
            s.play(legal[p % legal.len()]).unwrap();
        }
        s
    })
}

fn oracle_colors(adj: &[Vec<usize>], dominated: &[bool]) -> Vec<Color> {
    (0..adj.len())
        .map(|v| {
            if !dominated[v] {
                Color::White
            } else if adj[v].iter().all(|&w| dominated[w]) {
                Color::Red
            } else {
                Color::Blue
            }
        })
        .collect()
}

fn points(colors: &[Color]) -> u32 {
    colors
        .iter()
        .map(|c| match c {
            Color::White => 3,
            Color::Blue => 2,
            Color::Red => 0,
        })
        .sum()
}

/// Colors after playing `v`, by the case rules on a forest: `v` turns
/// Red; a White neighbor turns Red when it has no other White neighbor
/// and Blue otherwise; a Blue leaf of the residual graph next to `v` or
/// to a neighbor of `v` turns Red; nothing else changes.
fn case_rule_colors(adj: &[Vec<usize>], before: &[Color], v: usize) -> Vec<Color> {
    let active = |x: usize, y: usize| {
        before[x] != Color::Red && before[y] != Color::Red && !(before[x] == Color::Blue && before[y] == Color::Blue)
    };
    let res: Vec<Vec<usize>> =
        (0..adj.len()).map(|x| adj[x].iter().copied().filter(|&y| active(x, y)).collect()).collect();
    let mut after = before.to_vec();
    after[v] = Color::Red;
    for &u in &res[v] {
        if before[u] == Color::White {
            let other_white = res[u].iter().any(|&w| w != v && before[w] == Color::White);
            after[u] = if other_white { Color::Blue } else { Color::Red };
        }
    }
    let mut reach: Vec<usize> = res[v].clone();
    for &u in &res[v] {
        reach.extend(res[u].iter().copied());
    }
    for w in reach {
        if before[w] == Color::Blue && res[w].len() == 1 {
            after[w] = Color::Red;
        }
    }
    after
}

proptest! {
    #![proptest_config(config(2000))]

    #[test]
    fn recoloring_matches_case_rules(s in position()) {
        let n = s.n();
        let adj = common::adjacency(n, s.graph().edges());
        let dominated: Vec<bool> = (0..n).map(|v| s.dominated() >> v & 1 == 1).collect();
        let before = oracle_colors(&adj, &dominated);
        prop_assert_eq!(&s.colors(), &before);
        for v in 0..n {
            let legal = std::iter::once(v).chain(adj[v].iter().copied()).any(|w| !dominated[w]);
            prop_assert_eq!(s.is_legal(v), legal);
            if !legal {
                continue;
            }
            let expected = case_rule_colors(&adj, &before, v);
            let (next, outcome) = s.apply_move(v).unwrap();
            prop_assert_eq!(&next.colors(), &expected, "move {}", v);
            prop_assert_eq!(outcome.gain, points(&before) - points(&expected));
            prop_assert!(outcome.gain >= 3);
            let reds = (0..n).filter(|&x| before[x] != Color::Red && expected[x] == Color::Red).count();
            prop_assert_eq!(outcome.newly_red as usize, reds);
        }
    }
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn blue_leaf_in_large_component_gives_seven(s in position()) {
        let report = s.structure_report();
        if report.components.iter().any(|c| c.order() >= 3 && !c.blue_leaves.is_empty()) {
            prop_assert!(max_gain(&s) >= 7);
        }
    }

    #[test]
    fn no_isolated_vertex_ever_appears(s in position()) {
        for v in 0..s.n() {
            if s.color(v) != Color::Red {
                prop_assert!(s.residual_degree(v) >= 1, "vertex {} isolated", v);
            }
            if s.color(v) == Color::White {
                prop_assert_eq!(s.residual_degree(v), s.graph().degree(v));
            }
        }
    }

    #[test]
    fn value_is_potential(s in position()) {
        prop_assert_eq!(s.value() as usize, 3 * s.white_count() + 2 * s.blue_count());
    }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn solver_ignores_labels(n in 2usize..=14, seed in any::<u64>(), perm_seed in any::<u64>()) {
        let f = random_forest(n, 1 + seed as usize % (n / 2), seed).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut x = perm_seed;
        for i in (1..n).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (x >> 33) as usize % (i + 1));
        }
        let g = f.relabeled(&perm);
        for first in [Player::Dominator, Player::Staller] {
            prop_assert_eq!(
                game_dom_number(f.graph(), first).unwrap().value,
                game_dom_number(g.graph(), first).unwrap().value
            );
        }
        prop_assert_eq!(domination_number(f.graph()).unwrap(), domination_number(g.graph()).unwrap());
    }

    #[test]
    fn solver_matches_naive_on_forests(n in 2usize..=9, seed in any::<u64>()) {
        let f = random_forest(n, 1 + seed as usize % (n / 2), seed).unwrap();
        for first in [Player::Dominator, Player::Staller] {
            let naive = common::naive_game_value(n, f.edges(), first == Player::Dominator);
            prop_assert_eq!(game_dom_number(f.graph(), first).unwrap().value, naive);
        }
        prop_assert_eq!(domination_number(f.graph()).unwrap(), common::naive_domination_number(n, f.edges()));
    }

    #[test]
    fn forest_generator_invariants(n in 2usize..=40, k_seed in any::<usize>(), seed in any::<u64>()) {
        let k = 1 + k_seed % (n / 2);
        let f = random_forest(n, k, seed).unwrap();
        prop_assert_eq!(f.n(), n);
        prop_assert_eq!(f.components().len(), k);
        prop_assert_eq!(f.edge_count(), n - k);
        prop_assert!(f.is_isolate_free());
        prop_assert_eq!(&random_forest(n, k, seed).unwrap(), &f);
        let back = parse_edge_list(&to_edge_list(f.graph())).unwrap();
        prop_assert!(!back.has_isolated_vertices());
        prop_assert_eq!(back.value, f);
    }

    #[test]
    fn caterpillar_generator_invariants(n in 2usize..=30, seed in any::<u64>()) {
        let f = random_caterpillar(n, seed);
        prop_assert_eq!(f.n(), n);
        prop_assert_eq!(f.components().len(), 1);
        let inner: Vec<usize> = (0..n).filter(|&v| f.degree(v) > 1).collect();
        // the non-leaves induce a path: at most two of them have one inner neighbor
        let inner_degree = |v: usize| f.neighbors(v).iter().filter(|&&w| f.degree(w) > 1).count();
        prop_assert!(inner.iter().all(|&v| inner_degree(v) <= 2));
        prop_assert!(inner.len() <= 1 || inner.iter().filter(|&&v| inner_degree(v) == 1).count() == 2);
    }

    #[test]
    fn strategy_traces_are_reproducible(n in 2usize..=14, seed in any::<u64>()) {
        let f = random_forest(n, 1 + seed as usize % (n / 2), seed).unwrap();
        for first in [Player::Dominator, Player::Staller] {
            let a = run_game(&f, StallerPolicy::Random, first, seed).unwrap();
            let b = run_game(&f, StallerPolicy::Random, first, seed).unwrap();
            prop_assert_eq!(a.to_json(), b.to_json());
            let phases: Vec<_> = a.records.iter().map(|r| r.phase).collect();
            prop_assert!(phases.windows(2).all(|w| w[0] <= w[1]));
            if !leaf_pair_at_distance(f.graph(), 4) {
                prop_assert_eq!(a.c_star, 0);
            }
        }
    }
}

#[test]
fn k1_is_rejected_everywhere() {
    let k1 = Forest::new(1, []).unwrap();
    assert!(ResidualState::new(&k1).is_err());
    assert!(game_dom_number(k1.graph(), Player::Dominator).is_err());
    assert!(run_game(&k1, StallerPolicy::Optimal, Player::Dominator, 0).is_err());
}
