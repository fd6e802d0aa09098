//! Published values, kept verbatim as CSV.

use serde::{Deserialize, Serialize};

use super::{BenchmarkRecord, Provenance};

const TABLE1: &str = include_str!("../../data/table1.csv");
const TABLE2: &str = include_str!("../../data/table2.csv");
const TABLE3: &str = include_str!("../../data/table3.csv");

/// Tuned tails `(p_2, p_3)` behind the I_200, I_1500 and I_2500 columns.
pub const I_200: [f64; 2] = [0.5494, 0.7867];
pub const I_1500: [f64; 2] = [0.6193, 0.7830];
pub const I_2500: [f64; 2] = [0.71810558, 0.81422429];

pub fn tuned_params(method: &str) -> Option<&'static [f64]> {
    match method {
        "I_200" => Some(&I_200),
        "I_1500" => Some(&I_1500),
        "I_2500" => Some(&I_2500),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceTable {
    /// Best star discrepancy for d = 3.
    Table1,
    /// d = 3, before and after order-preserving post-processing.
    PostprocessingTable2,
    /// Star discrepancy for d = 4.
    Table3,
}

impl ReferenceTable {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "table1" => Some(Self::Table1),
            "table2" | "postprocessing_table2" => Some(Self::PostprocessingTable2),
            "table3" => Some(Self::Table3),
            _ => None,
        }
    }

    fn source(self) -> (&'static str, usize, &'static str) {
        match self {
            Self::Table1 => (
                TABLE1,
                3,
                "Table I: best found star discrepancy values for d = 3",
            ),
            Self::PostprocessingTable2 => {
                (TABLE2, 3, "Table II: star discrepancy with postprocessing")
            }
            Self::Table3 => (TABLE3, 4, "Table III: star discrepancy in 4 dimensions"),
        }
    }
}

/// Every published cell of `table`, row by row, as `paper_reference` records.
pub fn reference_table(table: ReferenceTable) -> Vec<BenchmarkRecord> {
    let (text, d, citation) = table.source();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().expect("header").split(',').collect();
    let mut out = Vec::new();
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        let n: usize = fields[0].parse().expect("size");
        for (method, cell) in header.iter().zip(&fields).skip(1) {
            if cell.is_empty() {
                continue;
            }
            out.push(BenchmarkRecord {
                method: method.to_string(),
                n,
                d,
                value: cell.parse().expect("value"),
                params: tuned_params(method).map(<[f64]>::to_vec),
                provenance: Provenance::PaperReference,
                citation: Some(citation.to_string()),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(table: ReferenceTable, method: &str, n: usize) -> Option<f64> {
        reference_table(table)
            .into_iter()
            .find(|r| r.method == method && r.n == n)
            .map(|r| r.value)
    }

    #[test]
    fn known_cells() {
        assert_eq!(cell(ReferenceTable::Table1, "I_2500", 2500), Some(0.00365));
        assert_eq!(cell(ReferenceTable::Table3, "Sobol'", 16), Some(0.13672));
        assert_eq!(
            cell(ReferenceTable::Table1, "L2_Subset", 200),
            Some(0.02181)
        );
        assert_eq!(cell(ReferenceTable::Table1, "L2_Subset", 300), None);
        assert_eq!(cell(ReferenceTable::Table1, "CMA-ES", 25), Some(0.10066));
        assert_eq!(
            cell(ReferenceTable::PostprocessingTable2, "o(MPMC)", 25),
            Some(0.08335)
        );
        assert_eq!(
            cell(ReferenceTable::Table3, "Irace_512", 5),
            Some(0.43494263)
        );
    }

    #[test]
    fn table_sizes() {
        let t1 = reference_table(ReferenceTable::Table1);
        assert_eq!(t1.len(), 24 * 4 + 15 + 14);
        assert!(t1
            .iter()
            .all(|r| r.d == 3 && r.provenance == Provenance::PaperReference));
        assert!(t1.iter().all(|r| r.citation.is_some()));
        assert_eq!(
            reference_table(ReferenceTable::PostprocessingTable2).len(),
            24
        );
        let t3 = reference_table(ReferenceTable::Table3);
        assert_eq!(t3.len(), 28);
        assert!(t3.iter().all(|r| r.d == 4));
    }

    #[test]
    fn tuned_columns_carry_parameters() {
        let t1 = reference_table(ReferenceTable::Table1);
        let r = t1.iter().find(|r| r.method == "I_1500").unwrap();
        assert_eq!(r.params.as_deref(), Some(&I_1500[..]));
        assert!(t1
            .iter()
            .find(|r| r.method == "Sobol'")
            .unwrap()
            .params
            .is_none());
    }

    #[test]
    fn table_names() {
        assert_eq!(
            ReferenceTable::parse("table1"),
            Some(ReferenceTable::Table1)
        );
        assert_eq!(
            ReferenceTable::parse("postprocessing_table2"),
            Some(ReferenceTable::PostprocessingTable2)
        );
        assert_eq!(ReferenceTable::parse("table4"), None);
    }
}
