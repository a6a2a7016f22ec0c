use crate::error::{invalid, Result};
use crate::extract::{EntityClass, EntitySpan};

pub const PERSON_PLACEHOLDER: &str = "someone";
pub const ORGANIZATION_PLACEHOLDER: &str = "some organization";

/// Replaces person and organization mentions with indefinite pronouns.
pub fn anonymize_claim(text: &str, entities: &[EntitySpan]) -> Result<String> {
    let mut spans: Vec<&EntitySpan> = entities.iter().collect();
    spans.sort_by_key(|s| (s.start, s.end));
    for s in &spans {
        s.validate(text)?;
    }
    for w in spans.windows(2) {
        if w[1].start < w[0].end {
            return Err(invalid(format!(
                "entity spans {}..{} and {}..{} overlap",
                w[0].start, w[0].end, w[1].start, w[1].end
            )));
        }
    }
    let mut out = String::with_capacity(text.len());
    let mut cursor = 0;
    for s in spans {
        let placeholder = match s.class {
            EntityClass::Person => PERSON_PLACEHOLDER,
            EntityClass::Organization => ORGANIZATION_PLACEHOLDER,
            EntityClass::Other => continue,
        };
        out.push_str(&text[cursor..s.start]);
        out.push_str(placeholder);
        cursor = s.end;
    }
    out.push_str(&text[cursor..]);
    Ok(out)
}
