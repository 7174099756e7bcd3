use super::output::StructuredOutput;

/// Values that do not occur verbatim in `source_text`, in output order, without repeats.
pub fn check_grounding(source_text: &str, output: &StructuredOutput) -> Vec<String> {
    let mut values: Vec<&str> = Vec::new();
    match output {
        StructuredOutput::Ner(o) => {
            values.extend(o.slots.values().flatten().map(String::as_str));
        }
        StructuredOutput::Re(o) => {
            for (head, tail) in o.relations.values().flatten() {
                values.push(head);
                values.push(tail);
            }
        }
        StructuredOutput::Ee(o) => {
            for group in o.events.values().flatten() {
                values.push(&group.trigger);
                values.extend(group.args.iter().map(|(_, arg)| arg.as_str()));
            }
        }
    }
    let mut missing: Vec<String> = Vec::new();
    for value in values {
        let value = value.trim();
        if !source_text.contains(value) && !missing.iter().any(|m| m == value) {
            missing.push(value.to_string());
        }
    }
    missing
}
