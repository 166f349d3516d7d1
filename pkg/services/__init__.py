# delpezzo-lines services
