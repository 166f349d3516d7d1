# Integration tests for delpezzo-lines
