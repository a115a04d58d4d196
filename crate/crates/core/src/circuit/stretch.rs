//! Turning a one-bit-stretching circuit into a length-doubling one.
//!
//! Stage `i` maps `n + i` bits to `n + i + 1` bits by applying `C` to the first
//! `n` bits and carrying the rest: `C'_i(z) = C(z[0..n)) ∘ z[n..n+i)`. Chaining
//! stages `0..n` gives `D: {0,1}^n -> {0,1}^{2n}`.

use super::{Circuit, CircuitBuilder};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::oracle::PreimageOracle;

#[derive(Clone, Debug)]
pub struct Stretch {
    c: Circuit,
    d: Circuit,
}

pub fn stretch_double(c: &Circuit) -> Result<Stretch> {
    let n = c.n_in();
    if n == 0 || c.n_out() != n + 1 {
        return Err(Error::shape(format!(
            "stretch needs a circuit n -> n+1, got {} -> {}",
            n,
            c.n_out()
        )));
    }
    let mut b = CircuitBuilder::new(n);
    let mut cur: Vec<_> = (0..n).map(|i| b.input(i)).collect();
    for _ in 0..n {
        let mut next = b.inline(c, &cur[..n]);
        next.extend_from_slice(&cur[n..]);
        cur = next;
    }
    Ok(Stretch {
        c: c.clone(),
        d: b.finish(cur)?,
    })
}

impl Stretch {
    pub fn circuit(&self) -> &Circuit {
        &self.c
    }

    pub fn doubled(&self) -> &Circuit {
        &self.d
    }

    /// Maps `y ∉ Range(D)` to a string of length `n + 1` outside `Range(C)`.
    pub fn backmap(&self, y: &BitString, oracle: &mut dyn PreimageOracle) -> Result<BitString> {
        let n = self.c.n_in();
        if y.len() != 2 * n {
            return Err(Error::shape(format!(
                "backmap expects {} bits, got {}",
                2 * n,
                y.len()
            )));
        }
        let mut cur = y.clone();
        while cur.len() > n {
            let head = cur.slice(0, n + 1);
            match oracle.lex_first_preimage(&self.c, &head)? {
                None => return Ok(head),
                Some(x) => cur = x.concat(&cur.slice(n + 1, cur.len())),
            }
        }
        Err(Error::ContractViolation(format!(
            "backmap: {y} lies in the range of the doubled circuit"
        )))
    }
}
