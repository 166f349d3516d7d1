# End-to-end tests for delpezzo-lines
