//! Serialization glue: numbers are written verbatim with 17 significant
//! digits instead of serde_json's shortest round-trip form.

use serde::ser::{Error as _, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::numeric::format_g17;
use crate::scalar::Scalar;

pub(crate) struct Raw(String);

impl Serialize for Raw {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        RawValue::from_string(self.0.clone())
            .map_err(Ser::Error::custom)?
            .serialize(serializer)
    }
}

pub(crate) fn real(x: f64) -> Raw {
    Raw(format_g17(x))
}

pub(crate) fn scalar<S: Scalar>(x: S) -> Raw {
    Raw(x.json_text())
}

pub(crate) fn list<S: Scalar>(xs: &[S]) -> Raw {
    let items: Vec<String> = xs.iter().map(|x| x.json_text()).collect();
    Raw(format!("[{}]", items.join(",")))
}

pub(crate) fn integers(xs: &[u64]) -> Raw {
    let items: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    Raw(format!("[{}]", items.join(",")))
}
