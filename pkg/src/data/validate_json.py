import json
import os

import fastjsonschema

from errors import ConfigError


def validate_conf(confpath, schemapath):
    """
    Load a JSON config file (config.json) and validate it against its JSON
    schema (config.schema.json). Returns the parsed config with the schema's
    defaults filled in.
    """
    if not os.path.isfile(confpath):
        raise ConfigError(f"unable to load {confpath}", path=str(confpath))
    if not os.path.isfile(schemapath):
        raise ConfigError(f"unable to load {schemapath}", path=str(schemapath))

    try:
        with open(confpath) as f:
            conf = json.load(f)
        with open(schemapath) as f:
            schema = json.load(f)
    except json.decoder.JSONDecodeError as e:
        raise ConfigError(f"invalid json error: {e}", path=str(confpath)) from e

    validator = fastjsonschema.compile(schema)
    try:
        return validator(conf)
    except fastjsonschema.JsonSchemaException as e:
        raise ConfigError(e.message, path=str(confpath)) from e
