use serde::Serialize;

use super::VerifyError;
use crate::bounds::THREE_FIFTHS;
use crate::graph::{enumerate_trees, GraphError, DEFAULT_ENUMERATION_LIMIT};
use crate::graph::{to_edge_list, Forest};
use crate::solver::{game_dom_number, Player};

/// Largest γ_g over all trees of one order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub n: usize,
    pub trees: usize,
    pub max_gamma_g: u32,
    pub floor_3n_5: i64,
    /// Trees attaining the maximum, as edge lists.
    pub attainers: Vec<String>,
}

impl ScanRow {
    /// The maximum exceeds ⌊3n/5⌋; reported, never suppressed.
    pub fn exceeds_three_fifths(&self) -> bool {
        self.max_gamma_g as i64 > self.floor_3n_5
    }
}

/// One row per order `2..=n_max`.
pub fn extremal_scan(n_max: usize) -> Result<Vec<ScanRow>, VerifyError> {
    if n_max > DEFAULT_ENUMERATION_LIMIT {
        return Err(GraphError::LimitExceeded { n: n_max, limit: DEFAULT_ENUMERATION_LIMIT }.into());
    }
    let mut rows = Vec::new();
    for n in 2..=n_max {
        let mut best = 0;
        let mut attainers: Vec<Forest> = Vec::new();
        let mut trees = 0;
        for t in enumerate_trees(n)? {
            trees += 1;
            let v = game_dom_number(t.graph(), Player::Dominator)?.value;
            if v > best {
                best = v;
                attainers.clear();
            }
            if v == best {
                attainers.push(t);
            }
        }
        rows.push(ScanRow {
            n,
            trees,
            max_gamma_g: best,
            floor_3n_5: THREE_FIFTHS.floor(n),
            attainers: attainers.iter().map(|f| to_edge_list(f.graph())).collect(),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_edge_list, tree_canonical_form};

    #[test]
    fn small_scan() {
        let rows = extremal_scan(5).unwrap();
        assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![2, 3, 4, 5]);
        assert_eq!(rows[0].max_gamma_g, 1);
        let five = &rows[3];
        assert_eq!((five.trees, five.max_gamma_g, five.floor_3n_5), (3, 3, 3));
        let p5 = tree_canonical_form(Forest::path(5).graph());
        assert!(five
            .attainers
            .iter()
            .any(|t| tree_canonical_form(parse_edge_list(t).unwrap().value.graph()) == p5));
        assert!(rows.iter().all(|r| !r.exceeds_three_fifths()));
        assert!(extremal_scan(19).is_err());
    }
}
