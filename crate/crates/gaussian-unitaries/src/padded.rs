use fock_core::{expm_action, FockSpace, LadderExpr, Mode};
use nalgebra::DMatrix;

use crate::C64;

/// Columns are one-mode vectors in the number basis; the row count is the
/// padded dimension, which grows as needed.
pub type PaddedVectors = DMatrix<C64>;

/// Largest squared mass, relative to each column's total, tolerated in the top
/// 15% of the padded basis.
pub const PADDING_TAIL_TOLERANCE: f64 = 1e-30;

fn edge_mass_ok(v: &DMatrix<C64>) -> bool {
    let edge = (v.nrows() as f64 * 0.85) as usize;
    v.column_iter().all(|c| {
        let total: f64 = c.iter().map(|x| x.norm_sqr()).sum();
        let tail: f64 = c.iter().skip(edge).map(|x| x.norm_sqr()).sum();
        tail <= PADDING_TAIL_TOLERANCE * total
    })
}

/// Squared mass, relative to each column, below which trailing rows are dropped.
const TRIM_TOLERANCE: f64 = 1e-34;

/// Rows needed to keep every column's tail mass below [`TRIM_TOLERANCE`].
fn support(v: &DMatrix<C64>) -> usize {
    v.column_iter()
        .map(|c| {
            let total: f64 = c.iter().map(|x| x.norm_sqr()).sum();
            let mut tail = 0.0;
            let mut n = c.len();
            while n > 0 {
                let next = tail + c[n - 1].norm_sqr();
                if next > TRIM_TOLERANCE * total {
                    break;
                }
                tail = next;
                n -= 1;
            }
            n
        })
        .max()
        .unwrap_or(0)
}

/// `exp(G)·v` for a one-mode generator, padding the basis until the result
/// carries no weight near the edge. The padding is sized from the input's
/// support, and the result keeps at least as many rows as the input but drops
/// negligible rows beyond that, so chained applications do not keep doubling
/// the basis.
pub fn padded_exp_apply(gen: &LadderExpr, v: &DMatrix<C64>) -> DMatrix<C64> {
    let rows_in = v.nrows();
    let v = v.rows(0, support(v).max(1)).into_owned();
    let n_in = v.nrows();
    let mut dim = (2 * n_in).max(n_in + 48);
    loop {
        let space = FockSpace::single(dim - 1).expect("dim >= 2");
        let action = gen.compile(space).expect("single-mode generator");
        let mut padded = DMatrix::zeros(dim, v.ncols());
        padded.rows_mut(0, n_in).copy_from(&v);
        let out = expm_action(&action, &padded);
        if edge_mass_ok(&out) {
            let keep = support(&out).max(n_in);
            let mut out = out.rows(0, keep).into_owned();
            if keep < rows_in {
                out = out.resize_vertically(rows_in, C64::new(0.0, 0.0));
            }
            return out;
        }
        dim = dim * 3 / 2;
    }
}

/// `S(λ)·v` with `S(λ) = exp (λ/2)(a² − a†²)`.
pub fn squeeze_apply(lambda: f64, v: &DMatrix<C64>) -> DMatrix<C64> {
    if lambda == 0.0 {
        return v.clone();
    }
    let gen = (LadderExpr::lower(Mode::A).pow(2) - LadderExpr::raise(Mode::A).pow(2)) * (0.5 * lambda);
    padded_exp_apply(&gen, v)
}

/// `exp(−iφ a†a)·v`.
pub fn rotate_apply(phi: f64, v: &DMatrix<C64>) -> DMatrix<C64> {
    let mut out = v.clone();
    for (n, mut row) in out.row_iter_mut().enumerate() {
        row *= C64::from_polar(1.0, -phi * n as f64);
    }
    out
}
