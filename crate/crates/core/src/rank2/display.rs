//! Multi-line rendering of rank decompositions as column vectors joined by
//! `⊗` and `+`.

use crate::rank2::{Matrix, RankOneTermList};
use crate::scalar::Scalar;

struct Block {
    lines: Vec<String>,
    width: usize,
}

impl Block {
    fn text(s: &str) -> Self {
        Block {
            lines: vec![s.to_string()],
            width: s.chars().count(),
        }
    }

    fn grid(rows: &[Vec<String>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let widths: Vec<usize> = (0..cols)
            .map(|j| rows.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
            .collect();
        let h = rows.len();
        let lines: Vec<String> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let (open, close) = match (h, i) {
                    (1, _) => ('[', ']'),
                    (_, 0) => ('⎡', '⎤'),
                    (_, i) if i + 1 == h => ('⎣', '⎦'),
                    _ => ('⎢', '⎥'),
                };
                let body: Vec<String> = r
                    .iter()
                    .zip(&widths)
                    .map(|(x, &w)| format!("{x:>w$}"))
                    .collect();
                format!("{open}{}{close}", body.join(" "))
            })
            .collect();
        let width = lines.first().map_or(0, |l| l.chars().count());
        Block { lines, width }
    }
}

fn join(blocks: &[Block]) -> String {
    let height = blocks.iter().map(|b| b.lines.len()).max().unwrap_or(0);
    let mut out = Vec::with_capacity(height);
    for row in 0..height {
        let mut line = String::new();
        for (k, b) in blocks.iter().enumerate() {
            if k > 0 {
                line.push(' ');
            }
            let top = (height - b.lines.len()) / 2;
            match row.checked_sub(top).and_then(|i| b.lines.get(i)) {
                Some(l) => line.push_str(l),
                None => line.push_str(&" ".repeat(b.width)),
            }
        }
        out.push(line.trim_end().to_string());
    }
    out.join("\n")
}

fn column<S: Scalar>(v: &[S]) -> Block {
    Block::grid(&v.iter().map(|x| vec![x.to_string()]).collect::<Vec<_>>())
}

fn rhs_blocks<S: Scalar>(terms: &RankOneTermList<S>) -> Vec<Block> {
    let mut blocks = Vec::new();
    if terms.is_empty() {
        blocks.push(Block::text("0"));
    }
    for (l, term) in terms.terms.iter().enumerate() {
        if l > 0 {
            blocks.push(Block::text("+"));
        }
        for (k, v) in term.iter().enumerate() {
            if k > 0 {
                blocks.push(Block::text("⊗"));
            }
            blocks.push(column(v.coeffs()));
        }
    }
    blocks
}

/// `M = u1 ⊗ v1 + …` with every vector drawn as a column.
pub fn render_decomposition<S: Scalar>(target: &Matrix<S>, terms: &RankOneTermList<S>) -> String {
    let rows: Vec<Vec<String>> = target
        .row_vecs()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect();
    let mut blocks = vec![Block::grid(&rows), Block::text("=")];
    blocks.extend(rhs_blocks(terms));
    join(&blocks)
}

/// Right-hand side only, for decompositions of any order.
pub fn render_terms<S: Scalar>(terms: &RankOneTermList<S>) -> String {
    join(&rhs_blocks(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank2::rank_decompose_rref;
    use crate::scalar::{int, Rational};

    #[test]
    fn rank_one_display() {
        let m: Matrix<Rational> =
            Matrix::from_rows(vec![vec![int(3), int(4)], vec![int(6), int(8)]]).unwrap();
        let dec = rank_decompose_rref(&m);
        let shown = render_decomposition(&m, &dec.terms());
        assert_eq!(shown, "⎡3 4⎤ = ⎡3⎤ ⊗ ⎡  1⎤\n⎣6 8⎦   ⎣6⎦   ⎣4/3⎦");
    }

    #[test]
    fn empty_sum_renders_zero() {
        let m: Matrix<Rational> = Matrix::zeros(1, 1);
        let shown = render_decomposition(&m, &RankOneTermList { terms: vec![] });
        assert_eq!(shown, "[0] = 0");
    }
}
