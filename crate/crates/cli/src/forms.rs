//! Eta-quotient descriptor names accepted on the command line.

use nonord_core::qseries::EtaQuotient;
use nonord_core::Error;

/// `8-4` and `9-4-cm` name the two reference forms; anything else must be an
/// explicit `(d,r);(d,r);...` factor list.
pub fn parse_form(s: &str) -> Result<EtaQuotient, Error> {
    match s {
        "8-4" => Ok(EtaQuotient::level8_weight4()),
        "9-4-cm" => Ok(EtaQuotient::eta3_8_cm()),
        other => parse_explicit(other),
    }
}

fn parse_explicit(s: &str) -> Result<EtaQuotient, Error> {
    let bad = |msg: &str| Error::InvalidDescriptor(format!("{msg}: '{s}'"));
    let mut factors = Vec::new();
    for part in s.split(';') {
        let inner = part
            .strip_prefix('(')
            .and_then(|p| p.strip_suffix(')'))
            .ok_or_else(|| bad("expected (d,r)"))?;
        let (d, r) = inner.split_once(',').ok_or_else(|| bad("expected (d,r)"))?;
        let d: u32 = d.trim().parse().map_err(|_| bad("bad scale"))?;
        let r: u32 = r.trim().parse().map_err(|_| bad("bad exponent"))?;
        factors.push((d, r));
    }
    EtaQuotient::new(factors)
}
