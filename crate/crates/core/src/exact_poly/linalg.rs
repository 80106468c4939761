//! Row reduction over a field, for linear forms and coordinate changes.

use super::field::Field;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn row_reduce<K: Field>(field: &K, rows: &mut Vec<Vec<K::Elem>>) -> Vec<usize> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][c])) else { continue };
        rows.swap(r, p);
        let inv = field.inv(&rows[r][c]).expect("nonzero pivot");
        for v in rows[r].iter_mut() {
            *v = field.mul(v, &inv);
        }
        for i in 0..rows.len() {
            if i != r && !field.is_zero(&rows[i][c]) {
                let factor = rows[i][c].clone();
                for k in 0..ncols {
                    let t = field.mul(&factor, &rows[r][k]);
                    rows[i][k] = field.sub(&rows[i][k], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank<K: Field>(field: &K, rows: &[Vec<K::Elem>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(field, &mut m).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_poly::field::{PrimeField, Rationals};

    #[test]
    fn ranks() {
        let q = Rationals;
        let r = |v: &[i64]| v.iter().map(|&x| q.from_i64(x)).collect::<Vec<_>>();
        assert_eq!(rank(&q, &[r(&[1, 2]), r(&[2, 4])]), 1);
        assert_eq!(rank(&q, &[r(&[1, 2, 0]), r(&[0, 1, 1]), r(&[1, 3, 1])]), 2);
        assert_eq!(rank::<Rationals>(&q, &[]), 0);
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(rank(&f2, &[vec![1, 1], vec![1, 1]]), 1);
        let mut m = vec![r(&[0, 2, 4]), r(&[1, 1, 1])];
        assert_eq!(row_reduce(&q, &mut m), vec![0, 1]);
        assert_eq!(m, vec![r(&[1, 0, -1]), r(&[0, 1, 2])]);
    }
}
