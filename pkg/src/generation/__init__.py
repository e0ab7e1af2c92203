"""Lead-generation pipeline: archive tasks, prompts, chat client, cleaning."""
