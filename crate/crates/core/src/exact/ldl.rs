use rug::Float;

/// `G = L D Lᵀ` for a symmetric matrix given by its lower triangle
/// (`lower[j][i]`, `i ≤ j`). `D_j` is the squared norm of the `j`-th monic
/// orthogonal vector.
pub(crate) struct Ldl {
    pub diag: Vec<Float>,
    /// `L[j][i]` for `i < j`.
    pub lower: Vec<Vec<Float>>,
    /// `max_j log2(G_jj / D_j)`, the bits lost to cancellation.
    pub loss_bits: f64,
}

pub(crate) enum LdlFailure {
    /// `D_j ≤ 0` at this degree.
    NotPositive(usize),
}

pub(crate) fn ldl(g: &[Vec<Float>], prec: u32) -> Result<Ldl, LdlFailure> {
    let k = g.len();
    let mut diag: Vec<Float> = Vec::with_capacity(k);
    let mut lower: Vec<Vec<Float>> = Vec::with_capacity(k);
    let mut loss: f64 = 0.0;
    for j in 0..k {
        let mut row: Vec<Float> = Vec::with_capacity(j);
        for i in 0..j {
            let mut s = g[j][i].clone();
            for q in 0..i {
                let t = Float::with_val(prec, &row[q] * &lower[i][q]);
                s -= t * &diag[q];
            }
            row.push(s / &diag[i]);
        }
        let mut dj = g[j][j].clone();
        for q in 0..j {
            let t = Float::with_val(prec, row[q].square_ref());
            dj -= t * &diag[q];
        }
        if !(dj > 0u32) {
            return Err(LdlFailure::NotPositive(j));
        }
        let ratio = Float::with_val(64, &g[j][j] / &dj);
        loss = loss.max(ratio.log2().to_f64());
        diag.push(dj);
        lower.push(row);
    }
    Ok(Ldl { diag, lower, loss_bits: loss })
}
