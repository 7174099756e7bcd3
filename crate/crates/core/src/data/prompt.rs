use serde::{Deserialize, Serialize};

use crate::codec::{Task, TaskSchema};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PromptMode {
    /// Full-format targets.
    Cm,
    /// Concise targets.
    Sa,
}

const PREAMBLE: &str = "You are an information extraction assistant.";
const CONCISE: &str = "Please use concise output with no empty fields.";
const INPUT_CUE: &str = "The user input is:";

fn instruction(schema: &TaskSchema) -> String {
    match schema.task {
        Task::Ner => format!(
            "{PREAMBLE} Strictly extract {} slots ({}) from the user input. Slot values must be exact substrings of the input. If a slot has multiple values, join them with ' | ' in the order of first appearance and remove duplicates.",
            schema.labels.len(),
            schema.labels.join(", ")
        ),
        Task::Re => format!(
            "{PREAMBLE} Strictly extract relation pairs for the following relation types ({}) from the user input. Values must be exact substrings of the input. If a relation has multiple pairs, join them with ' | ' in the order of first appearance, and each pair must be formatted as 'word1, word2'.",
            schema.labels.join(", ")
        ),
        Task::Ee => format!(
            "{PREAMBLE} Strictly extract events for the following event types from the user input and reply with a single JSON object only. The keys MUST be exactly these event types: [{}]. For each event type, group arguments by trigger. Format each group as `TRIGGER: ROLE: argument; ROLE: argument`. Valid roles include: [{}].",
            schema.labels.join(", "),
            schema.roles.join(", ")
        ),
    }
}

/// Instruction, optional concise-output request, input cue, then the input on its own line.
pub fn render_prompt(schema: &TaskSchema, input: &str, mode: PromptMode) -> String {
    let mut prompt = instruction(schema);
    match mode {
        PromptMode::Cm => prompt.push(' '),
        PromptMode::Sa => {
            prompt.push('\n');
            prompt.push_str(CONCISE);
            prompt.push(' ');
        }
    }
    prompt.push_str(INPUT_CUE);
    prompt.push('\n');
    prompt.push_str(input);
    prompt
}
