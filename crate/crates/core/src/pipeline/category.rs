use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::table::TableLayout;

pub const ROW_BINS: usize = 5;
pub const COL_BINS: usize = 4;

/// Cell of the 5×4 table-size grid: row-count bin `A..E` by column-count bin
/// `1..4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Category {
    row_bin: u8,
    col_bin: u8,
}

impl Category {
    pub fn new(row_bin: usize, col_bin: usize) -> Self {
        assert!(row_bin < ROW_BINS && col_bin < COL_BINS, "bin ({row_bin}, {col_bin}) outside 5x4 grid");
        Category {
            row_bin: row_bin as u8,
            col_bin: col_bin as u8,
        }
    }

    /// Zero-based row bin (`A` = 0).
    pub fn row_bin(&self) -> usize {
        self.row_bin as usize
    }

    /// Zero-based column bin (`1` = 0).
    pub fn col_bin(&self) -> usize {
        self.col_bin as usize
    }

    /// All 20 categories, row-major.
    pub fn all() -> impl Iterator<Item = Category> {
        (0..ROW_BINS).flat_map(|r| (0..COL_BINS).map(move |c| Category::new(r, c)))
    }

    pub(crate) fn flat(&self) -> usize {
        self.row_bin() * COL_BINS + self.col_bin()
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", (b'A' + self.row_bin) as char, self.col_bin + 1)
    }
}

impl FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let b = s.as_bytes();
        if b.len() == 2 && (b'A'..=b'E').contains(&b[0]) && (b'1'..=b'4').contains(&b[1]) {
            Ok(Category::new((b[0] - b'A') as usize, (b[1] - b'1') as usize))
        } else {
            Err(Error::Domain(format!("`{s}` is not a category (A1..E4)")))
        }
    }
}

impl Serialize for Category {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Category {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Inclusive upper bounds of every bin except the last, which is open.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CategoryBins {
    pub row_upper: [usize; ROW_BINS - 1],
    pub col_upper: [usize; COL_BINS - 1],
}

impl Default for CategoryBins {
    /// Rows `A:1-3 B:4-6 C:7-9 D:10-12 E:13+`, columns `1:1-3 2:4-6 3:7-8 4:9+`.
    fn default() -> Self {
        CategoryBins {
            row_upper: [3, 6, 9, 12],
            col_upper: [3, 6, 8],
        }
    }
}

impl CategoryBins {
    pub fn categorize(&self, rows: usize, cols: usize) -> Result<Category> {
        if rows < 1 || cols < 1 {
            return Err(Error::Domain(format!("cannot categorize a {rows}x{cols} table")));
        }
        let bin = |n: usize, upper: &[usize]| upper.iter().position(|&u| n <= u).unwrap_or(upper.len());
        Ok(Category::new(bin(rows, &self.row_upper), bin(cols, &self.col_upper)))
    }

    pub fn of(&self, layout: &TableLayout) -> Result<Category> {
        self.categorize(layout.row_count(), layout.col_count())
    }
}

/// Category under the default bins.
pub fn categorize(rows: usize, cols: usize) -> Result<Category> {
    CategoryBins::default().categorize(rows, cols)
}

/// Non-negative 5×4 grid indexed by [`Category`].
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct CategoryGrid(pub [[f64; COL_BINS]; ROW_BINS]);

impl CategoryGrid {
    pub fn zeros() -> Self {
        CategoryGrid::default()
    }

    pub fn filled(v: f64) -> Self {
        CategoryGrid([[v; COL_BINS]; ROW_BINS])
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().flatten().sum()
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().flatten().copied()
    }

    pub fn scaled(&self, k: f64) -> Self {
        let mut g = *self;
        g.0.iter_mut().flatten().for_each(|v| *v *= k);
        g
    }

    /// Frequency table of `categories`.
    pub fn count<I: IntoIterator<Item = Category>>(categories: I) -> Self {
        let mut g = CategoryGrid::zeros();
        for c in categories {
            g[c] += 1.0;
        }
        g
    }
}

impl Index<Category> for CategoryGrid {
    type Output = f64;

    fn index(&self, c: Category) -> &f64 {
        &self.0[c.row_bin()][c.col_bin()]
    }
}

impl IndexMut<Category> for CategoryGrid {
    fn index_mut(&mut self, c: Category) -> &mut f64 {
        &mut self.0[c.row_bin()][c.col_bin()]
    }
}

impl fmt::Display for CategoryGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "   ")?;
        for c in 0..COL_BINS {
            write!(f, "{:>10}", c + 1)?;
        }
        for (r, row) in self.0.iter().enumerate() {
            write!(f, "\n{:<3}", (b'A' + r as u8) as char)?;
            for v in row {
                write!(f, "{v:>10.4}")?;
            }
        }
        Ok(())
    }
}

/// Frequency of source tables over categories.
pub fn global_frequency<'a, I>(tables: I, bins: &CategoryBins) -> Result<CategoryGrid>
where
    I: IntoIterator<Item = &'a TableLayout>,
{
    let cats = tables.into_iter().map(|t| bins.of(t)).collect::<Result<Vec<_>>>()?;
    Ok(CategoryGrid::count(cats))
}
