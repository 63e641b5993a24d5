# API routers: /homfly and /ov
