use serde::{Deserialize, Serialize};

use super::laurent::LefschetzLaurent;
use crate::error::{Error, Result};

/// The base curve: its genus, the numerator of its Kapranov zeta function
/// (coefficients of a polynomial in `T` of degree `2g`, constant term 1) and
/// the class of its Jacobian when known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveData {
    genus: u32,
    kapranov_numerator: Vec<LefschetzLaurent>,
    /// `None` stands for an opaque symbol with no expression in `L`.
    pic0_class: Option<LefschetzLaurent>,
}

impl CurveData {
    /// The projective line.
    pub fn genus0() -> Self {
        CurveData { genus: 0, kapranov_numerator: vec![LefschetzLaurent::one()], pic0_class: Some(LefschetzLaurent::one()) }
    }

    pub fn new(
        genus: u32,
        kapranov_numerator: Vec<LefschetzLaurent>,
        pic0_class: Option<LefschetzLaurent>,
    ) -> Result<Self> {
        if kapranov_numerator.len() != 2 * genus as usize + 1 {
            return Err(Error::InvalidFan(format!(
                "Kapranov numerator of a genus-{genus} curve has degree {}",
                2 * genus
            )));
        }
        if !kapranov_numerator[0].is_one() {
            return Err(Error::InvalidFan("Kapranov numerator must have constant term 1".into()));
        }
        if genus == 0 && pic0_class.as_ref().is_some_and(|c| !c.is_one()) {
            return Err(Error::InvalidFan("genus 0 forces [Pic^0] = 1".into()));
        }
        let pic0_class = if genus == 0 { Some(LefschetzLaurent::one()) } else { pic0_class };
        Ok(CurveData { genus, kapranov_numerator, pic0_class })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn kapranov_numerator(&self) -> &[LefschetzLaurent] {
        &self.kapranov_numerator
    }

    pub fn pic0_class(&self) -> Option<&LefschetzLaurent> {
        self.pic0_class.as_ref()
    }

    pub fn require_genus0(&self) -> Result<()> {
        if self.genus != 0 {
            return Err(Error::UnsupportedGenus(self.genus));
        }
        Ok(())
    }

    /// `[C] = 1 + L` in exact mode.
    pub fn class(&self) -> Result<LefschetzLaurent> {
        self.require_genus0()?;
        Ok(LefschetzLaurent::projective_space(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_zero_invariants() {
        let c = CurveData::genus0();
        assert_eq!(c.class().unwrap(), LefschetzLaurent::projective_space(1));
        assert!(CurveData::new(0, vec![LefschetzLaurent::one()], Some(LefschetzLaurent::l())).is_err());
        assert!(CurveData::new(0, vec![LefschetzLaurent::l()], None).is_err());
    }

    #[test]
    fn higher_genus_is_symbolic_only() {
        let num = vec![LefschetzLaurent::one(), LefschetzLaurent::from_int(-1), LefschetzLaurent::l()];
        let c = CurveData::new(1, num, None).unwrap();
        assert_eq!(c.class(), Err(Error::UnsupportedGenus(1)));
        assert!(CurveData::new(1, vec![LefschetzLaurent::one()], None).is_err());
    }
}
