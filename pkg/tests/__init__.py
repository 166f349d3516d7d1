# delpezzo-lines tests
