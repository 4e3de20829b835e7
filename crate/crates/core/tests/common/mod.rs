#![allow(dead_code)]

use std::path::PathBuf;

use srtor::cli::{parse_problem, ProblemSpec};
use srtor::{IntMatrix, SimplicialComplex, SubgroupData};

pub fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(name)
}

pub fn load(name: &str) -> ProblemSpec {
    let text = std::fs::read_to_string(corpus_path(name)).unwrap();
    parse_problem(&text).unwrap()
}

/// Every well-formed corpus file, by file name.
pub fn corpus() -> Vec<(String, ProblemSpec)> {
    let mut names: Vec<String> = std::fs::read_dir(corpus_path(""))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".tcx") && !n.starts_with("malformed"))
        .collect();
    names.sort();
    names.into_iter().map(|n| (n.clone(), load(&n))).collect()
}

pub fn subgroup(rows: &[&[i64]]) -> SubgroupData {
    SubgroupData::new(IntMatrix::from_rows(rows.iter().map(|r| r.to_vec())).unwrap()).unwrap()
}

pub fn square() -> SimplicialComplex {
    SimplicialComplex::new(4, &[vec![1, 2], vec![2, 3], vec![3, 4], vec![1, 4]]).unwrap()
}

/// `dim Z[K]_{2k}` by enumerating all degree-`k` monomials and keeping
/// those whose support is a face.
pub fn brute_force_hilbert(k: &SimplicialComplex, half_degree: u32) -> i64 {
    fn go(k: &SimplicialComplex, var: usize, left: u32, support: &mut Vec<usize>) -> i64 {
        let m = k.vertex_count();
        if left == 0 {
            return i64::from(k.is_face(support).unwrap());
        }
        if var > m {
            return 0;
        }
        let mut total = go(k, var + 1, left, support);
        support.push(var);
        for e in 1..=left {
            total += go(k, var + 1, left - e, support);
        }
        support.pop();
        total
    }
    go(k, 1, half_degree, &mut Vec::new())
}

/// Coefficient of `t^j` in `Hilb_K(t) * (1 - t^2)^n`.
pub fn euler_oracle(k: &SimplicialComplex, n: usize, j: u32) -> i64 {
    let top = j / 2;
    (0..=top.min(n as u32))
        .map(|i| {
            let binom = (0..i).fold(1i64, |acc, t| acc * (n as i64 - t as i64) / (t as i64 + 1));
            let sign = if i % 2 == 0 { 1 } else { -1 };
            sign * binom * brute_force_hilbert(k, top - i)
        })
        .sum()
}
