use rayon::prelude::*;
use serde_json::{json, Value};

use super::closed::d_value;

/// A vanishing `D_l` at `(g, n, k, l)` with `l` sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScanZero {
    pub g: u32,
    pub n: usize,
    pub k: u32,
    pub l: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub range: (u32, u32),
    pub n_filter: Option<usize>,
    pub zeros: Vec<ScanZero>,
    pub cells_checked: u64,
}

impl ScanReport {
    pub fn conventions() -> Value {
        json!({
            "n": "2 <= n <= g",
            "k": "k >= 1",
            "l": "l_j >= 1, stored in ascending order",
        })
    }

    pub fn to_json_value(&self) -> Value {
        let mut conventions = Self::conventions();
        if let Some(n) = self.n_filter {
            conventions["n_filter"] = json!(n);
        }
        json!({
            "range": [self.range.0, self.range.1],
            "conventions": conventions,
            "zeros": self.zeros.iter().map(|z| json!([z.g, z.n, z.k, z.l])).collect::<Vec<_>>(),
            "cells_checked": self.cells_checked,
        })
    }
}

/// Nondecreasing vectors of `parts` integers `>= min` summing to `total`.
fn partitions(total: u32, parts: usize, min: u32) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut first = min;
    while first * parts as u32 <= total {
        for mut rest in partitions(total - first, parts - 1, first) {
            rest.insert(0, first);
            out.push(rest);
        }
        first += 1;
    }
    out
}

/// Every `(g, n, k, l)` with `D_l = 0` for `g_min <= g <= g_max`,
/// `2 <= n <= g`, `k >= 1`, `l_j >= 1` nondecreasing.
pub fn scan_zeros(g_min: u32, g_max: u32) -> ScanReport {
    scan_zeros_filtered(g_min, g_max, None)
}

/// As [`scan_zeros`], optionally restricted to one value of `n`.
pub fn scan_zeros_filtered(g_min: u32, g_max: u32, n_filter: Option<usize>) -> ScanReport {
    let cells: Vec<(u32, usize)> = (g_min.max(1)..=g_max)
        .flat_map(|g| (2..=g as usize).map(move |n| (g, n)))
        .filter(|&(_, n)| n_filter.is_none_or(|m| m == n))
        .collect();
    let results: Vec<(Vec<ScanZero>, u64)> = cells
        .par_iter()
        .map(|&(g, n)| {
            let mut zeros = Vec::new();
            let mut checked = 0;
            for k in 1..g {
                for l in partitions(g - k, n - 1, 1) {
                    checked += 1;
                    if d_value(g, k, &l).expect("consistent by construction").is_zero() {
                        zeros.push(ScanZero { g, n, k, l });
                    }
                }
            }
            (zeros, checked)
        })
        .collect();
    let mut zeros = Vec::new();
    let mut cells_checked = 0;
    for (z, c) in results {
        zeros.extend(z);
        cells_checked += c;
    }
    zeros.sort();
    ScanReport { range: (g_min, g_max), n_filter, zeros, cells_checked }
}
