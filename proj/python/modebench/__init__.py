# Copyright 2026 The modebench Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Mode-weight recovery benchmark for samplers on a bi-modal Gaussian mixture."""

from modebench._core import (
    DomainError,
    Error,
    Target,
    ValidationError,
    cli,
    estimate,
    true_mode_weight,
    validate,
)

SAMPLERS = ("mala", "is", "vi", "smc", "re", "slips")

__all__ = [
    "DomainError",
    "Error",
    "SAMPLERS",
    "Target",
    "ValidationError",
    "cli",
    "estimate",
    "true_mode_weight",
    "validate",
]
