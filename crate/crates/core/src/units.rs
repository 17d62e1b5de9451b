//! Power-unit conversions and physical constants.

use crate::math;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

/// Converts dBm to milliwatts.
#[inline]
pub fn dbm_to_mw(dbm: f64) -> f64 {
    math::powf(10.0, dbm / 10.0)
}

/// Converts milliwatts to dBm. Returns `-inf` for 0 mW.
#[inline]
pub fn mw_to_dbm(mw: f64) -> f64 {
    10.0 * math::log10(mw)
}

/// Converts watts to dBm.
#[inline]
pub fn watts_to_dbm(watts: f64) -> f64 {
    mw_to_dbm(watts * 1e3)
}

/// Converts a dB ratio to linear scale.
#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    math::powf(10.0, db / 10.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn dbm_golden_points() {
        assert_relative_eq!(dbm_to_mw(0.0), 1.0);
        assert_relative_eq!(dbm_to_mw(30.0), 1000.0);
        assert_relative_eq!(dbm_to_mw(-70.0), 1e-7);
        assert_relative_eq!(mw_to_dbm(1.0), 0.0);
        assert_relative_eq!(watts_to_dbm(20.0), 43.0102999566398, epsilon = 1e-9);
    }

    #[test]
    fn dbm_mw_roundtrip() {
        for dbm in [-120.0, -70.0, -3.3, 0.0, 17.25, 43.0] {
            assert_relative_eq!(mw_to_dbm(dbm_to_mw(dbm)), dbm, epsilon = 1e-12);
        }
    }
}
