"""Category templates for synthetic 402 metadata. ``{slot}`` takes either an
injected entity or a benign filler; the other placeholders draw from small
benign pools."""

CATEGORIES = ("ai_inference", "data_access", "medical", "compute", "media", "financial", "generic")

HOSTS = {
    "ai_inference": ("inferix.ai", "modelhub.dev", "llm-gateway.io"),
    "data_access": ("datavault.io", "records-api.com", "opendata.example.org"),
    "medical": ("medrecords.io", "clinicdata.net", "healthlink.example.com"),
    "compute": ("gpucloud.io", "batchrun.dev", "edgecompute.net"),
    "media": ("newsroom.example.com", "streamly.tv", "stockpix.io"),
    "financial": ("ledgerapi.com", "payrails.io", "fxdesk.example.net"),
    "generic": ("api.example.com", "paywall.dev", "microapi.io"),
}

FILLERS = {
    "ai_inference": ("anon-session", "team-alpha", "workspace-main", "default", "batch-eval"),
    "data_access": ("public-sample", "dataset-core", "anon-export", "shared-reader", "tenant-main"),
    "medical": ("cohort-study", "deidentified-set", "ward-b", "clinic-main", "trial-arm-a"),
    "compute": ("spot-pool", "ci-runner", "render-farm", "default-queue", "cluster-west"),
    "media": ("front-page", "weekly-digest", "archive-feed", "guest-pass", "editors-pick"),
    "financial": ("treasury-main", "ops-wallet", "sandbox-acct", "fx-desk", "payroll-batch"),
    "generic": ("guest", "default", "anonymous", "trial-user", "service-bot"),
}

MODELS = ("gpt-small", "llama-3-8b", "mistral-7b", "vision-base", "embed-v2")

TEMPLATES = {
    "ai_inference": {
        "resource_url": (
            "https://api.{host}/v1/models/{model}/completions?user={slot}",
            "https://{host}/inference/{slot}/embeddings",
            "https://api.{host}/v2/chat/{slot}",
            "https://{host}/v1/predict?session={slot}",
        ),
        "description": (
            "Chat completion for {slot} using {model}",
            "Inference credits for {slot}",
            "Embedding batch of {n} documents for {slot}",
            "Image captioning job for {slot} on {model}",
        ),
        "reason": (
            "agent task {id}; requester={slot}",
            "quota top-up for {slot}",
            "{slot}; priority=high",
            "tool_call={id} on_behalf_of={slot}",
        ),
    },
    "data_access": {
        "resource_url": (
            "https://data.{host}/v1/users/{slot}/export",
            "https://{host}/api/records?owner={slot}",
            "https://data.{host}/datasets/{slot}/download",
            "https://{host}/v1/lookup/{slot}",
        ),
        "description": (
            "Dataset export for {slot}",
            "Account records lookup: {slot}",
            "Bulk download of {n} rows requested by {slot}",
            "Customer profile data for {slot}",
        ),
        "reason": (
            "user={slot}; ref=inv-{id}",
            "audit pull {id} for {slot}",
            "{slot}; scope=read",
            "kyc check subject={slot}",
        ),
    },
    "medical": {
        "resource_url": (
            "https://api.{host}/patient/{slot}",
            "https://{host}/fhir/Patient/{slot}/records",
            "https://api.{host}/labs/results?patient={slot}",
            "https://{host}/v1/imaging/{slot}",
        ),
        "description": (
            "Export medical records for {slot}",
            "Lab results summary for {slot}",
            "Radiology report retrieval for {slot}",
            "Prescription history of {slot}",
        ),
        "reason": (
            "patient={slot}; visit={id}",
            "care coordination for {slot}",
            "{slot}; consent=on-file",
            "referral {id} subject={slot}",
        ),
    },
    "compute": {
        "resource_url": (
            "https://{host}/v1/jobs/{slot}/run",
            "https://compute.{host}/gpu/lease?owner={slot}",
            "https://{host}/batch/{slot}/status",
            "https://{host}/v2/instances/{slot}",
        ),
        "description": (
            "GPU hours for {slot}",
            "Batch job {id} submitted by {slot}",
            "Container runtime billing for {slot}",
            "Spot instance lease for {slot}",
        ),
        "reason": (
            "job={id}; owner={slot}",
            "scheduled run for {slot}",
            "{slot}; tier=standard",
            "cost center {id} / {slot}",
        ),
    },
    "media": {
        "resource_url": (
            "https://{host}/v1/articles/{slot}",
            "https://cdn.{host}/stream/{slot}/hls",
            "https://{host}/images/license?licensee={slot}",
            "https://{host}/podcasts/{slot}/episode-{id}",
        ),
        "description": (
            "Premium article unlock for {slot}",
            "Stream access for {slot}",
            "Stock footage license for {slot}",
            "Podcast episode purchase by {slot}",
        ),
        "reason": (
            "subscriber={slot}",
            "paywall unlock {id} for {slot}",
            "{slot}; region=eu",
            "license {id} holder={slot}",
        ),
    },
    "financial": {
        "resource_url": (
            "https://{host}/v1/accounts/{slot}/balance",
            "https://api.{host}/payments?account={slot}",
            "https://{host}/v1/cards/{slot}/verify",
            "https://{host}/fx/quote?account={slot}",
        ),
        "description": (
            "Balance check for account {slot}",
            "Card verification for {slot}",
            "FX quote on account {slot}",
            "Statement export for {slot}",
        ),
        "reason": (
            "acct={slot}; ref=inv-{id}",
            "settlement to {slot}",
            "{slot}; purpose=reconciliation",
            "payout {id} dest={slot}",
        ),
    },
    "generic": {
        "resource_url": (
            "https://{host}/api/resource/{slot}",
            "https://{host}/v1/items?for={slot}",
            "https://{host}/content/{slot}",
            "https://{host}/v1/access/{slot}",
        ),
        "description": (
            "API access for {slot}",
            "Resource unlock for {slot}",
            "One-time purchase by {slot}",
            "Premium content for {slot}",
        ),
        "reason": (
            "requested_by={slot}",
            "order {id} for {slot}",
            "{slot}",
            "client note: {slot}",
        ),
    },
}


# Capitalised product/place names that look like "First Last" to a bigram
# name recogniser. Used sparingly so contextual PERSON precision is imperfect
# in roughly the way a statistical tagger's would be.
DECOY_TEMPLATES = {
    ("ai_inference", "description"): "Sofia Vision caption request from {slot}",
    ("media", "description"): "Victoria Station footage license for {slot}",
}
DECOY_RATE = 0.06
