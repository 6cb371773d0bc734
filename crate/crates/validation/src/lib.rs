//! Synthetic multi-label data for validating the library.

use std::fmt::Write as _;
use std::path::Path;

use flma::MultiLabelDataset;
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Clustered data: every instance belongs to one of `clusters` prototypes,
/// each with a characteristic label set, and labels are flipped with
/// probability `noise`. Features are the prototype centre plus uniform
/// jitter.
pub fn synthetic(
    n: usize,
    d: usize,
    c: usize,
    clusters: usize,
    noise: f64,
    seed: u64,
) -> MultiLabelDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centres: Vec<Vec<f64>> = (0..clusters)
        .map(|_| (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect())
        .collect();
    let protos: Vec<Vec<u8>> = (0..clusters)
        .map(|_| (0..c).map(|_| u8::from(rng.gen_bool(0.4))).collect())
        .collect();
    let mut x = Array2::zeros((n, d));
    let mut y = Array2::zeros((n, c));
    for i in 0..n {
        let k = rng.gen_range(0..clusters);
        for j in 0..d {
            x[[i, j]] = centres[k][j] + rng.gen_range(-1.0..1.0);
        }
        for j in 0..c {
            y[[i, j]] = protos[k][j] ^ u8::from(rng.gen_bool(noise));
        }
    }
    MultiLabelDataset::new(
        x,
        y,
        (0..d).map(|j| format!("f{j}")).collect(),
        (0..c).map(|j| format!("l{j}")).collect(),
    )
    .expect("generated names are unique")
}

/// CSV with features first and labels last, loadable with `load_csv`.
pub fn write_csv(ds: &MultiLabelDataset, path: &Path) -> std::io::Result<()> {
    let mut out = String::new();
    let header: Vec<&str> = ds
        .feature_names()
        .iter()
        .chain(ds.label_names())
        .map(String::as_str)
        .collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for i in 0..ds.instance_count() {
        let mut cells: Vec<String> = ds.features().row(i).iter().map(|v| v.to_string()).collect();
        cells.extend(ds.labels().row(i).iter().map(|v| v.to_string()));
        let _ = writeln!(out, "{}", cells.join(","));
    }
    std::fs::write(path, out)
}

/// Random binary matrix of up to `max_n x max_c` with a density drawn from
/// [0.1, 0.9].
pub fn random_labels(rng: &mut ChaCha8Rng, max_n: usize, max_c: usize) -> Array2<u8> {
    let n = rng.gen_range(1..=max_n);
    let c = rng.gen_range(1..=max_c);
    let density = rng.gen_range(0.1..=0.9);
    Array2::from_shape_fn((n, c), |_| u8::from(rng.gen_bool(density)))
}
