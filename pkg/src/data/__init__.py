"""Run configuration: schema validation and the resolved RunConfig."""
