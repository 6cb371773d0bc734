//! Dataset and matrix file formats.

mod arff;
mod table;

pub use arff::{load_mulan_arff, parse_label_spec};
pub use table::{load_csv, read_numeric_table, write_matrix, NumericTable};
