//! Exact steady state of a time-independent generator by dense linear
//! algebra, for spaces small enough to hold the superoperator.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::generator::Generator;
use crate::error::{invalid, Error, Result};

type C = Complex64;

/// Largest M·N accepted by [`null_space_steady`].
pub const MAX_DIM: usize = 24;

/// Dense superoperator of a static generator, column index r·dim + c.
pub fn superoperator(gen: &Generator) -> Result<DMatrix<C>> {
    if !gen.is_static() {
        return Err(invalid("generator", "drives oscillate in the frame"));
    }
    let dim = gen.dim();
    let d2 = dim * dim;
    let mut l = DMatrix::<C>::zeros(d2, d2);
    let mut basis = gen.scratch();
    let (mut ls, mut la) = (gen.scratch(), gen.scratch());
    let i = C::new(0.0, 1.0);
    for r in 0..dim {
        for c in r..dim {
            // E_rc = (S − iA)/2 with S = E_rc + E_cr and A = i(E_rc − E_cr),
            // both Hermitian.
            basis.fill(C::new(0.0, 0.0));
            basis[r * dim + c] += 1.0;
            basis[c * dim + r] += 1.0;
            gen.apply(0.0, &basis, &mut ls);
            basis.fill(C::new(0.0, 0.0));
            if r != c {
                basis[r * dim + c] = i;
                basis[c * dim + r] = -i;
                gen.apply(0.0, &basis, &mut la);
            }
            for k in 0..d2 {
                if r == c {
                    l[(k, r * dim + r)] = ls[k] * 0.5;
                } else {
                    l[(k, r * dim + c)] = (ls[k] - i * la[k]) * 0.5;
                    l[(k, c * dim + r)] = (ls[k] + i * la[k]) * 0.5;
                }
            }
        }
    }
    Ok(l)
}

/// Steady state from the null space of L with the trace condition replacing
/// the first row.
pub fn null_space_steady(gen: &Generator) -> Result<Vec<C>> {
    let dim = gen.dim();
    if dim > MAX_DIM {
        return Err(invalid("dim", format!("at most {MAX_DIM}")));
    }
    let mut l = superoperator(gen)?;
    let d2 = dim * dim;
    for k in 0..d2 {
        l[(0, k)] = C::new(0.0, 0.0);
    }
    for r in 0..dim {
        l[(0, r * dim + r)] = C::new(1.0, 0.0);
    }
    let mut rhs = DVector::<C>::zeros(d2);
    rhs[0] = C::new(1.0, 0.0);
    let lu = l.lu();
    let sol = lu.solve(&rhs).ok_or(Error::NoUniqueSteadyState)?;
    Ok(sol.iter().cloned().collect())
}
