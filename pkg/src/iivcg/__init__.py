"""VCG-style contracts for common agency under incomplete information, in exact arithmetic."""
