//! Elementary abelian 2-groups and sign matrices indexed by them.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported rank; rows are stored as 64-bit masks.
pub const MAX_RANK: u32 = 6;

/// The group `(Z/2)^rank` on the integers `0..2^rank` under XOR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Group2 {
    rank: u32,
}

impl Group2 {
    pub fn new(rank: u32) -> Result<Self, SignError> {
        if rank > MAX_RANK {
            return Err(SignError::RankTooLarge(rank));
        }
        Ok(Group2 { rank })
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn order(&self) -> usize {
        1 << self.rank
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        a ^ b
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignError {
    #[error("rank {0} exceeds the supported maximum of {MAX_RANK}")]
    RankTooLarge(u32),
    #[error("order {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("entry {value} at ({row}, {col}) is not +1 or -1")]
    InvalidEntry { row: usize, col: usize, value: i64 },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

/// A `{+1, -1}` matrix with rows and columns indexed by a [`Group2`].
///
/// Row `x` is stored as a bit mask whose bit `w` is set iff `M[x][w] = -1`.
/// The derived ordering compares row masks lexicographically and is the
/// canonical sort order used for enumeration output.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignMatrix {
    group: Group2,
    rows: Vec<u64>,
}

impl SignMatrix {
    pub fn from_masks(group: Group2, rows: Vec<u64>) -> Self {
        assert_eq!(rows.len(), group.order());
        let keep = full_mask(group.order());
        SignMatrix {
            group,
            rows: rows.into_iter().map(|r| r & keep).collect(),
        }
    }

    pub fn all_ones(group: Group2) -> Self {
        SignMatrix {
            group,
            rows: vec![0; group.order()],
        }
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, SignError> {
        let order = rows.len();
        let group = Group2::new(rank_of(order)?)?;
        let mut masks = Vec::with_capacity(order);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != order {
                return Err(SignError::Parse {
                    line: i + 1,
                    column: row.len().min(order) + 1,
                    message: format!("row has {} entries, expected {order}", row.len()),
                });
            }
            let mut mask = 0u64;
            for (j, &v) in row.iter().enumerate() {
                match v {
                    1 => {}
                    -1 => mask |= 1 << j,
                    value => {
                        return Err(SignError::InvalidEntry {
                            row: i,
                            col: j,
                            value,
                        })
                    }
                }
            }
            masks.push(mask);
        }
        Ok(SignMatrix { group, rows: masks })
    }

    /// Parses the `+`/`-` text format, one row per line.
    pub fn parse(text: &str) -> Result<Self, SignError> {
        let lines: Vec<&str> = text
            .lines()
            .map(|l| l.trim_end_matches('\r'))
            .collect();
        let last = lines.iter().rposition(|l| !l.is_empty()).map_or(0, |p| p + 1);
        let lines = &lines[..last];
        if lines.is_empty() {
            return Err(SignError::Parse {
                line: 1,
                column: 1,
                message: "empty sign matrix".into(),
            });
        }
        let order = lines[0].chars().count();
        let mut rows = Vec::with_capacity(order);
        for (i, line) in lines.iter().enumerate() {
            let mut row = Vec::with_capacity(order);
            for (j, ch) in line.chars().enumerate() {
                match ch {
                    '+' => row.push(1),
                    '-' => row.push(-1),
                    other => {
                        return Err(SignError::Parse {
                            line: i + 1,
                            column: j + 1,
                            message: format!("invalid character {other:?}, expected '+' or '-'"),
                        })
                    }
                }
            }
            if row.len() != order {
                return Err(SignError::Parse {
                    line: i + 1,
                    column: row.len().min(order) + 1,
                    message: format!("row has length {}, expected {order}", row.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() != order {
            return Err(SignError::Parse {
                line: rows.len() + 1,
                column: 1,
                message: format!("matrix has {} rows but {order} columns", rows.len()),
            });
        }
        if !order.is_power_of_two() {
            return Err(SignError::Parse {
                line: 1,
                column: 1,
                message: format!("order {order} is not a power of two"),
            });
        }
        Self::from_rows(&rows)
    }

    pub fn to_text(&self) -> String {
        let n = self.order();
        let mut out = String::with_capacity(n * (n + 1));
        for &row in &self.rows {
            for w in 0..n {
                out.push(if row >> w & 1 == 1 { '-' } else { '+' });
            }
            out.push('\n');
        }
        out
    }

    pub fn group(&self) -> Group2 {
        self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn masks(&self) -> &[u64] {
        &self.rows
    }

    /// Entry `M[x][y]` as `+1` or `-1`.
    pub fn get(&self, x: usize, y: usize) -> i8 {
        if self.rows[x] >> y & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn is_negative(&self, x: usize, y: usize) -> bool {
        self.rows[x] >> y & 1 == 1
    }

    pub fn flipped(&self, x: usize, y: usize) -> Self {
        let mut out = self.clone();
        out.rows[x] ^= 1 << y;
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.order();
        let mut rows = vec![0u64; n];
        for (x, row) in rows.iter_mut().enumerate() {
            for y in 0..n {
                if self.is_negative(y, x) {
                    *row |= 1 << y;
                }
            }
        }
        SignMatrix {
            group: self.group,
            rows,
        }
    }

    /// `D_r * M * D_c` where bit `i` of a mask negates row or column `i`.
    pub fn switched(&self, row_signs: u64, col_signs: u64) -> Self {
        let full = full_mask(self.order());
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(x, &r)| {
                let r = r ^ col_signs;
                if row_signs >> x & 1 == 1 {
                    !r & full
                } else {
                    r & full
                }
            })
            .collect();
        SignMatrix {
            group: self.group,
            rows,
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.rows[0] == 0 && self.rows.iter().all(|r| r & 1 == 0)
    }

    /// First triple `(x, y, z)` with `x != y` violating
    /// `M[x][xz] M[x][yz] M[y][xz] M[y][yz] = -1`, if any.
    pub fn admissibility_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.order();
        for x in 0..n {
            for y in x + 1..n {
                for z in 0..n {
                    let (xz, yz) = (x ^ z, y ^ z);
                    let product = self.get(x, xz) * self.get(x, yz) * self.get(y, xz) * self.get(y, yz);
                    if product != -1 {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }
}

impl fmt::Debug for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignMatrix(\n{})", self.to_text())
    }
}

impl fmt::Display for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub(crate) fn full_mask(order: usize) -> u64 {
    if order >= 64 {
        u64::MAX
    } else {
        (1u64 << order) - 1
    }
}

fn rank_of(order: usize) -> Result<u32, SignError> {
    if order == 0 || !order.is_power_of_two() {
        return Err(SignError::NotPowerOfTwo(order));
    }
    let rank = order.trailing_zeros();
    if rank > MAX_RANK {
        return Err(SignError::RankTooLarge(rank));
    }
    Ok(rank)
}

/// Checks the condition `M[x][xz] M[x][yz] M[y][xz] M[y][yz] = -1` for all
/// `x != y` and all `z`. Order 1 is vacuously admissible.
pub fn admissible(m: &SignMatrix) -> bool {
    m.admissibility_witness().is_none()
}

/// Switches row and column signs so that the first row and column are all `+1`.
pub fn normalize_signs(m: &SignMatrix) -> SignMatrix {
    let col_signs = m.rows[0];
    let after_cols = m.switched(0, col_signs);
    let row_signs = after_cols
        .rows
        .iter()
        .enumerate()
        .fold(0u64, |acc, (x, r)| acc | ((r & 1) << x));
    after_cols.switched(row_signs, 0)
}

/// The three example matrices of orders 2, 4 and 8, which arise as sign
/// patterns of multiplication tables of the complex numbers, quaternions
/// and octonions.
pub mod examples {
    use super::SignMatrix;

    pub fn order2() -> SignMatrix {
        SignMatrix::from_rows(&[[1, 1], [1, -1]]).unwrap()
    }

    pub fn order4() -> SignMatrix {
        SignMatrix::from_rows(&[
            [1, 1, 1, 1],
            [1, -1, 1, -1],
            [1, -1, -1, 1],
            [1, 1, -1, -1],
        ])
        .unwrap()
    }

    pub fn order8() -> SignMatrix {
        SignMatrix::from_rows(&[
            [1, 1, 1, 1, 1, 1, 1, 1],
            [1, -1, 1, -1, 1, -1, -1, 1],
            [1, -1, -1, 1, 1, 1, -1, -1],
            [1, 1, -1, -1, 1, -1, 1, -1],
            [1, -1, -1, -1, -1, 1, 1, 1],
            [1, 1, -1, 1, -1, -1, -1, 1],
            [1, 1, 1, -1, -1, 1, -1, -1],
            [1, -1, 1, 1, -1, -1, 1, -1],
        ])
        .unwrap()
    }

    pub fn by_rank(rank: u32) -> Option<SignMatrix> {
        match rank {
            1 => Some(order2()),
            2 => Some(order4()),
            3 => Some(order8()),
            _ => None,
        }
    }
}
