//! Expected values computed here by independent means.

use quadalg::invariants::centre;
use quadalg::presets::{Preset, Sl2Block, Sl3Block};
use quadalg::series::PolyMatrix;
use quadalg::{DenseMatrix, Field, GradedAlgebra, Scalar};

/// Fraction-free Gaussian elimination over the integers.
fn bareiss_rank(mut m: Vec<Vec<i128>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = 1i128;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                m[r][k] = (m[rank][c] * m[r][k] - m[r][c] * m[rank][k]) / prev;
            }
            m[r][c] = 0;
        }
        prev = m[rank][c];
        rank += 1;
    }
    rank
}

#[test]
fn sl3_relations_have_integer_rank_36() {
    let p = Sl3Block.presentation(Field::Rationals).unwrap();
    let r = p.relation_matrix();
    let ints: Vec<Vec<i128>> = r
        .row_vecs()
        .iter()
        .map(|row| row.iter().map(|s| s.to_i64().expect("integral coefficients") as i128).collect())
        .collect();
    assert_eq!(bareiss_rank(ints), 36);
    assert_eq!(r.rank(), 36);
}

#[test]
fn sl3_vanishes_in_degree_5_over_prime_fields() {
    for p in [5, 7, 11] {
        let pres = Sl3Block.presentation(Field::prime(p).unwrap()).unwrap();
        let alg = GradedAlgebra::build(&pres, 8).unwrap();
        assert_eq!(alg.vanished_at(), Some(5), "p = {p}");
        assert_eq!(alg.degree_dims()[..5], [3, 12, 18, 12, 3]);
    }
}

/// `kC₂ ⋉ k[x,y]/(x²,y²)` on the basis `x^i y^j g^a`, index `4a + 2i + j`,
/// with `g·x = -x·g`, `g·y = -y·g`.
struct Smash;

impl Smash {
    fn unpack(b: usize) -> (usize, usize, usize) {
        (b / 4, (b / 2) % 2, b % 2)
    }

    fn degree(b: usize) -> usize {
        let (_, i, j) = Self::unpack(b);
        i + j
    }

    /// `(x^i y^j g^a)(x^k y^l g^b) = (-1)^{a(k+l)} x^{i+k} y^{j+l} g^{a+b}`.
    fn mul(a: usize, b: usize) -> Vec<i64> {
        let (ga, i, j) = Self::unpack(a);
        let (gb, k, l) = Self::unpack(b);
        let mut out = vec![0; 8];
        if i + k <= 1 && j + l <= 1 {
            let sign = if (ga * (k + l)) % 2 == 1 { -1 } else { 1 };
            out[4 * ((ga + gb) % 2) + 2 * (i + k) + (j + l)] = sign;
        }
        out
    }

    fn mul_vec(x: &[i64], y: &[i64]) -> Vec<i64> {
        let mut out = vec![0; 8];
        for a in 0..8 {
            for b in 0..8 {
                if x[a] != 0 && y[b] != 0 {
                    for (o, p) in out.iter_mut().zip(Self::mul(a, b)) {
                        *o += x[a] * y[b] * p;
                    }
                }
            }
        }
        out
    }
}

fn to_q(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&c| Field::Rationals.from_i64(c)).collect()
}

#[test]
fn sl2_block_matches_smash_product() {
    let alg = GradedAlgebra::build(&Sl2Block.presentation(Field::Rationals).unwrap(), 8).unwrap();
    assert_eq!(alg.dim(), 8);
    let by_degree: Vec<usize> = (0..3).map(|n| (0..8).filter(|&b| Smash::degree(b) == n).count()).collect();
    assert_eq!(alg.degree_dims()[..3], by_degree[..]);

    // Centre: kernel of b -> [b, generator] for the generators g, x, y.
    let gens = [4, 2, 1];
    let cols: Vec<Vec<Scalar>> = (0..8)
        .map(|b| {
            let mut col = Vec::new();
            for &g in &gens {
                let (l, r) = (Smash::mul(b, g), Smash::mul(g, b));
                col.extend(to_q(&l.iter().zip(&r).map(|(p, q)| p - q).collect::<Vec<_>>()));
            }
            col
        })
        .collect();
    let m = DenseMatrix::from_rows(Field::Rationals, 24, cols).unwrap().transpose();
    let z = m.kernel_basis().unwrap().rows();
    assert_eq!(z, 3);
    assert_eq!(centre(&alg).unwrap().dim(), z);

    // Hilbert entry (α, β) t^n = dim e_β Γ_n e_α with e± = (1 ± g)/2, doubled
    // to stay integral.
    let e = [[1, 0, 0, 0, 1, 0, 0, 0], [1, 0, 0, 0, -1, 0, 0, 0]];
    let mut entries = vec![vec![vec![0i64; 3]; 2]; 2];
    for (s, es) in e.iter().enumerate() {
        for (t, et) in e.iter().enumerate() {
            for n in 0..3 {
                let rows: Vec<Vec<Scalar>> = (0..8)
                    .filter(|&b| Smash::degree(b) == n)
                    .map(|b| {
                        let mut unit = vec![0; 8];
                        unit[b] = 1;
                        to_q(&Smash::mul_vec(&Smash::mul_vec(et, &unit), es))
                    })
                    .collect();
                entries[s][t][n] = DenseMatrix::from_rows(Field::Rationals, 8, rows).unwrap().rank() as i64;
            }
        }
    }
    let expected = PolyMatrix::from_i64s(vec!["plus".into(), "minus".into()], entries);
    assert_eq!(alg.hilbert_matrix().unwrap(), expected);
}
