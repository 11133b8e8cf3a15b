# Copyright 2026 The Coins Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import pathlib

import jsonschema
import pytest

DOCS = pathlib.Path(__file__).resolve().parents[2] / "docs"


@pytest.fixture(scope="session")
def protocol_schema():
    schema = json.loads((DOCS / "protocol.schema.json").read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    return schema


@pytest.fixture(scope="session")
def validate(protocol_schema):
    """Checks one message against a named definition of the schema."""
    validators = {}

    def check(message, definition):
        if definition not in validators:
            validators[definition] = jsonschema.Draft202012Validator(
                {"$ref": f"#/$defs/{definition}", "$defs": protocol_schema["$defs"]})
        validators[definition].validate(message)

    return check
