use super::{
    check_ggm, check_output_width, check_prefix, BackendKind, OracleConfig, PreimageOracle,
};
use crate::bits::BitString;
use crate::circuit::{lane_inputs, Circuit};
use crate::error::{Error, Result};
use crate::ggm;

/// Answers by enumerating every completion of the prefix, 64 at a time.
#[derive(Debug, Clone)]
pub struct ExhaustiveOracle {
    config: OracleConfig,
    queries: u64,
}

impl ExhaustiveOracle {
    pub fn new(config: OracleConfig) -> Self {
        Self { config, queries: 0 }
    }

    fn check_width(&self, free: usize) -> Result<()> {
        if free > self.config.max_enum_width {
            return Err(Error::capacity(format!(
                "exhaustive search over {free} free bits exceeds cap {}",
                self.config.max_enum_width
            )));
        }
        Ok(())
    }
}

impl Default for ExhaustiveOracle {
    fn default() -> Self {
        Self::new(OracleConfig::default())
    }
}

impl PreimageOracle for ExhaustiveOracle {
    fn has_preimage(&mut self, c: &Circuit, y: &BitString, prefix: &[bool]) -> Result<bool> {
        check_output_width(c, y)?;
        check_prefix(c, prefix)?;
        let free = c.n_in() - prefix.len();
        self.check_width(free)?;
        self.queries += 1;

        let total = 1u64 << free;
        let mut start = 0u64;
        while start < total {
            let suffix = lane_inputs(start, free);
            let words: Vec<u64> = prefix
                .iter()
                .map(|&b| if b { !0u64 } else { 0 })
                .chain(suffix)
                .collect();
            let outs = c.eval_lanes(&words);
            let mut hit = if total - start >= 64 {
                !0u64
            } else {
                (1u64 << (total - start)) - 1
            };
            for (w, yb) in outs.iter().zip(y.iter()) {
                hit &= if yb { *w } else { !*w };
            }
            if hit != 0 {
                return Ok(true);
            }
            start += 64;
        }
        Ok(false)
    }

    fn ggm_has_preimage(
        &mut self,
        c: &Circuit,
        t: u64,
        f: &BitString,
        prefix: &[bool],
    ) -> Result<bool> {
        let shape = check_ggm(c, t, f)?;
        check_prefix(c, prefix)?;
        let free = c.n_in() - prefix.len();
        self.check_width(free)?;
        self.queries += 1;
        for s in 0..1u64 << free {
            let mut seed = BitString::from_bits(prefix.to_vec());
            seed.extend(&BitString::from_u64(s, free));
            if ggm::matches(c, &shape, &seed, f) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn queries(&self) -> u64 {
        self.queries
    }

    fn kind(&self) -> BackendKind {
        BackendKind::Exhaustive
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dup2_queries() {
        let mut o = ExhaustiveOracle::default();
        let c = Circuit::dup(2);
        assert!(o.has_preimage(&c, &"0101".parse().unwrap(), &[]).unwrap());
        assert!(!o.has_preimage(&c, &"0110".parse().unwrap(), &[]).unwrap());
        assert_eq!(
            o.lex_first_preimage(&c, &"1111".parse().unwrap())
                .unwrap()
                .unwrap()
                .to_string(),
            "11"
        );
        assert!(o.queries() >= 3);
    }

    #[test]
    fn width_cap() {
        let mut o = ExhaustiveOracle::new(OracleConfig {
            max_enum_width: 1,
            ..Default::default()
        });
        let c = Circuit::dup(2);
        assert!(matches!(
            o.has_preimage(&c, &"0101".parse().unwrap(), &[]),
            Err(Error::Capacity(_))
        ));
        assert!(o
            .has_preimage(&c, &"0101".parse().unwrap(), &[false])
            .unwrap());
    }
}
