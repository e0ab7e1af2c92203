"""Chat prompts used to generate synthetic leads."""

from typing import Tuple

import regex

from generation.models import GenerationTask

SYSTEM_PROMPT = "You are a professional journalist specializing in writing news. Follow the given structure."

USER_PROMPT_TEMPLATE = (
    "You will write a news lead paragraph using the inputs below.\n"
    "  Inputs\n"
    "  Headline: {headline}\n"
    "  LeadThreeWords: {lead_three_words}\n"
    "  Requirements - Mandatory\n"
    "  Write one paragraph of several sentences (more than one, e.g. two-three (2-3)); no title, no bullets.\n"
    "  Output format: the paragraph only, no preamble or labels."
)

_PLACEHOLDER = regex.compile(r"\{(headline|lead_three_words)\}")


def render_prompts(task: GenerationTask) -> Tuple[str, str]:
    """
    Return (system, user). Substitution is a single pass over the template,
    so braces inside a headline are copied through untouched.

    Raises:
        BadTask: empty headline or a lead that is not exactly three tokens
    """
    task.validate()
    values = {"headline": task.headline, "lead_three_words": task.lead_three_words}
    user = _PLACEHOLDER.sub(lambda m: values[m.group(1)], USER_PROMPT_TEMPLATE)
    return SYSTEM_PROMPT, user
