//! Candidate extreme rays of nine GHZ-diagonal cones, written as sign
//! patterns: every nonzero `z` entry stands for both signs.

use std::collections::BTreeSet;

use crate::cones::ConeId;
use crate::xcore::GhzDiagonal;

use super::Ray;

type Pattern = ([i64; 4], [i64; 4]);

const DELTA: &[Pattern] =
    &[([1, 0, 0, 0], [0; 4]), ([0, 1, 0, 0], [0; 4]), ([0, 0, 1, 0], [0; 4]), ([0, 0, 0, 1], [0; 4])];

/// One row of the table: cone, the row it extends (if any), added patterns,
/// and the stated count.
pub struct Row {
    pub cone: &'static str,
    pub extends: Option<&'static str>,
    pub patterns: &'static [Pattern],
    pub count: usize,
}

pub const ROWS: &[Row] = &[
    Row { cone: "A^B^C", extends: None, patterns: &[([1, 1, 1, 1], [1, 1, 1, 1])], count: 20 },
    Row {
        cone: "A^B",
        extends: Some("A^B^C"),
        patterns: &[
            ([1, 0, 1, 1], [1, 0, 0, 0]),
            ([0, 1, 1, 1], [0, 1, 0, 0]),
            ([1, 1, 1, 0], [0, 0, 1, 0]),
            ([1, 1, 0, 1], [0, 0, 0, 1]),
        ],
        count: 28,
    },
    Row {
        cone: "(A^B)v(A^C)",
        extends: Some("A^B"),
        patterns: &[
            ([1, 1, 0, 1], [1, 0, 0, 0]),
            ([0, 1, 1, 1], [0, 0, 1, 0]),
            ([1, 1, 1, 0], [0, 1, 0, 0]),
            ([1, 0, 1, 1], [0, 0, 0, 1]),
        ],
        count: 36,
    },
    Row {
        cone: "A^(BvC)",
        extends: Some("(A^B)v(A^C)"),
        patterns: &[
            ([1, 2, 0, 1], [1, 0, 0, 1]),
            ([1, 0, 2, 1], [1, 0, 0, 1]),
            ([2, 1, 1, 0], [0, 1, 1, 0]),
            ([0, 1, 1, 2], [0, 1, 1, 0]),
            ([1, 2, 2, 1], [1, 2, 0, 1]),
            ([1, 2, 2, 1], [1, 0, 2, 1]),
            ([2, 1, 1, 2], [2, 1, 1, 0]),
            ([2, 1, 1, 2], [0, 1, 1, 2]),
        ],
        count: 84,
    },
    Row {
        cone: "A",
        extends: None,
        patterns: &[([1, 0, 0, 1], [1, 0, 0, 1]), ([0, 1, 1, 0], [0, 1, 1, 0])],
        count: 12,
    },
    Row {
        cone: "Av(B^C)",
        extends: Some("A"),
        patterns: &[
            ([1, 1, 1, 0], [1, 0, 0, 0]),
            ([0, 1, 1, 1], [0, 0, 0, 1]),
            ([1, 1, 0, 1], [0, 1, 0, 0]),
            ([1, 0, 1, 1], [0, 0, 1, 0]),
        ],
        count: 20,
    },
    Row {
        cone: "(AvB)^(AvC)",
        extends: Some("Av(B^C)"),
        patterns: &[
            ([1, 1, 2, 0], [1, 1, 0, 0]),
            ([1, 2, 1, 0], [1, 0, 1, 0]),
            ([2, 1, 0, 1], [0, 1, 0, 1]),
            ([2, 0, 1, 1], [0, 0, 1, 1]),
            ([1, 1, 0, 2], [1, 1, 0, 0]),
            ([1, 0, 1, 2], [1, 0, 1, 0]),
            ([0, 1, 2, 1], [0, 1, 0, 1]),
            ([0, 2, 1, 1], [0, 0, 1, 1]),
        ],
        count: 52,
    },
    Row {
        cone: "AvB",
        extends: None,
        patterns: &[
            ([1, 0, 0, 1], [1, 0, 0, 1]),
            ([0, 1, 1, 0], [0, 1, 1, 0]),
            ([1, 0, 1, 0], [1, 0, 1, 0]),
            ([0, 1, 0, 1], [0, 1, 0, 1]),
        ],
        count: 20,
    },
    Row {
        cone: "AvBvC",
        extends: Some("AvB"),
        patterns: &[([1, 1, 0, 0], [1, 1, 0, 0]), ([0, 0, 1, 1], [0, 0, 1, 1])],
        count: 28,
    },
];

/// Every sign choice of a pattern.
pub fn expand(pattern: &Pattern) -> Vec<Ray> {
    let (a, z) = pattern;
    let support: Vec<usize> = (0..4).filter(|&i| z[i] != 0).collect();
    (0..1u32 << support.len())
        .map(|mask| {
            let mut zz = *z;
            for (k, &i) in support.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    zz[i] = -zz[i];
                }
            }
            Ray::ghz(*a, zz)
        })
        .collect()
}

fn row_for(cone: &ConeId) -> Option<&'static Row> {
    ROWS.iter().find(|r| r.cone.parse::<ConeId>().ok().as_ref() == Some(cone))
}

/// The cones of the table, top to bottom.
pub fn cones() -> Vec<ConeId> {
    ROWS.iter().map(|r| r.cone.parse().expect("table cone names parse")).collect()
}

pub fn expected_count(cone: &ConeId) -> Option<usize> {
    row_for(cone).map(|r| r.count)
}

/// The expanded candidate set, sorted.
pub fn candidates(cone: &ConeId) -> Option<Vec<Ray>> {
    let row = row_for(cone)?;
    let mut set: BTreeSet<Ray> = match row.extends {
        Some(prev) => candidates(&prev.parse().expect("table cone names parse"))?.into_iter().collect(),
        None => DELTA.iter().flat_map(expand).collect(),
    };
    set.extend(row.patterns.iter().flat_map(expand));
    Some(set.into_iter().collect())
}

/// The exhibited (state, witness) pairs satisfying the extremality condition.
pub fn published_witnesses() -> Vec<(ConeId, GhzDiagonal, GhzDiagonal)> {
    let g = GhzDiagonal::from_i64;
    let meet_join: ConeId = "A^(BvC)".parse().expect("valid");
    let meet_of_joins: ConeId = "(AvB)^(AvC)".parse().expect("valid");
    vec![
        (meet_join, g([1, 0, 0, 0], [0, 0, 0, 0]), g([0, 1, 1, 1], [0, 0, 0, 0])),
        (meet_join, g([1, 1, 1, 1], [1, 1, 1, 1]), g([1, 1, 1, 1], [-1, -1, -1, -1])),
        (meet_join, g([1, 0, 1, 1], [1, 0, 0, 0]), g([1, 3, 1, 1], [-3, 0, 0, 0])),
        (meet_join, g([1, 1, 0, 1], [1, 0, 0, 0]), g([1, 1, 3, 1], [-3, 0, 0, 0])),
        (meet_join, g([1, 2, 0, 1], [1, 0, 0, 1]), g([1, 1, 2, 1], [-2, 0, 0, -2])),
        (meet_join, g([1, 2, 2, 1], [1, 2, 0, 1]), g([2, 1, 1, 2], [-1, -3, 0, -1])),
        (meet_of_joins, g([1, 0, 0, 1], [1, 0, 0, 1]), g([1, 1, 1, 1], [-1, 0, 0, -1])),
        (meet_of_joins, g([1, 1, 1, 0], [1, 0, 0, 0]), g([1, 1, 1, 3], [-3, 0, 0, 0])),
        (meet_of_joins, g([1, 1, 2, 0], [1, 1, 0, 0]), g([1, 5, 1, 3], [-3, -5, 0, 0])),
    ]
}
