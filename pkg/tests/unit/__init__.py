# Unit tests for delpezzo-lines
