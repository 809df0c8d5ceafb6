// DTOs mirroring the triage API's JSON wire format. The client renders these
// payloads verbatim; it never derives or maps domain values on its own.

export interface CategoryDto {
    id: string;
    label: string;
    description: string;
    parent?: string | null;
}

export interface QuestionDto {
    id: string;
    label: string;
    prompt: string;
    order: number;
    group: string;
    selection: 'single' | 'multi';
    categories: CategoryDto[];
}

export interface SchemaDto {
    id: string;
    name: string;
    questions: QuestionDto[];
}

export interface NextQuestionDto {
    done: boolean;
    question: QuestionDto | null;
}

export interface SessionDto {
    session_id: string;
    schema_id: string;
    answers: Record<string, string[]>;
    created_at: string;
    updated_at: string;
}

export interface AssignmentDto {
    status: 'assigned' | 'unknown';
    categories: string[];
    rationale: string[];
}

export interface ClassificationDto {
    schema_id: string;
    assignments: Record<string, AssignmentDto>;
}

export interface PlanEntryDto {
    group: string;
    action_id: string;
    text: string;
}

export interface DefensePlanDto {
    attack_name: string;
    entries: PlanEntryDto[];
}

export interface ResultDto {
    classification: ClassificationDto;
    defense_plan: DefensePlanDto;
}

export interface DossierDto {
    name: string;
    evidence: Record<string, unknown>;
    curated: ClassificationDto;
    annotations: Record<string, [string, string][]>;
    provenance: string;
}

export interface ApiErrorDto {
    code: string;
    message: string;
    subject: string | null;
}
